"""Relational structures, graphs and encodings"""
