"""
Tests for QCE Diversity
"""
