"""
Test package for the Bateman-Horn toolkit.
"""
