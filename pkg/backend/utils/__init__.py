"""
Utils package initialization for the entanglement-swapping simulator
"""
