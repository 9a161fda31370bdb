"""Certificate-producing checkers for mixing conditions"""
