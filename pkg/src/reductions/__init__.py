"""Reductions between parameterized problems"""
