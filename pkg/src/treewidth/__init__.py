"""Tree decompositions"""
