"""Fixed-parameter model-checking engines"""
