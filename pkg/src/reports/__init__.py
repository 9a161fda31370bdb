"""Report schema, element literals and certificate replay"""
