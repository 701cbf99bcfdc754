"""
@author jacobi petrucciani
@desc tests for warpiso
"""
