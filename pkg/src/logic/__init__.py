"""First-order and propositional syntax"""
