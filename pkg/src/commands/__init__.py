"""CLI command handlers"""
