"""Homological representations of free-group automorphisms over finite abelian covers."""
