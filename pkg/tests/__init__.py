"""Test suite for mixlab"""
