"""
Test suite for Dividend Recovery System.
"""
