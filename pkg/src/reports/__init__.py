"""
Text renderings of genus, string, search and oracle results
"""
