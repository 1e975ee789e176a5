"""Command-line layer"""
