"""Mixlab: certificate-producing mixing checks for group triples"""
