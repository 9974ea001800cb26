"""
Routes package initialization for the simulation report service
"""
