"""Topological vertex partition functions with flux sectors and KP checks."""
