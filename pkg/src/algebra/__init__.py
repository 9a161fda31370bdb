"""Exact calculus on finitely supported group-algebra elements"""
