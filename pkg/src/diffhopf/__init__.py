"""Exact computations with the Hopf algebra of formal diffeomorphisms and its deformations."""
