"""
model tests for warpiso
"""
