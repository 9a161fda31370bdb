"""Integration tests for mixlab"""
