"""
Engine layer: exact linear algebra, quivers, ideals, algebras and representations.
"""
