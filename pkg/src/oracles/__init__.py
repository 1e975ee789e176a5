"""Brute-force reference algorithms"""
