"""
Floating-point cross-checks for the exact genus engine
"""
