"""
Exact algebra over Q(q): braidings, quantum symmetric algebras and their graded endomorphisms.
"""
