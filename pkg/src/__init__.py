"""
Genera of complete intersections in products of projective spaces
"""
