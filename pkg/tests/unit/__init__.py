"""Unit tests for mixlab"""
