"""Experiments tying algebra values to combinatorial certificates"""
