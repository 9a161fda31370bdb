"""Computable groups, subgroups and constructions"""
