"""Finite unitary magmas, retraction points and their classifying actions."""
