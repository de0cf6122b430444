"""Shared helpers: observer pattern, terminal reports, key=value text files"""
