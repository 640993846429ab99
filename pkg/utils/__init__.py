"""Logging, numeric helpers and atomic file output"""
