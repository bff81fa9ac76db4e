"""
Unit tests
"""
