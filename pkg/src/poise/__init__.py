"""Balance point masses on polygon boundaries, polyhedron surfaces, and
polytope skeletons, with machine-checkable certificates."""

__version__ = "0.1.0"
