"""
Exact series arithmetic, geometry, string search and data loading
"""
