"""proxyforge package

Landscape-aware algorithm discovery: evolve cheap proxy functions whose
landscape features match an expensive target, search algorithms on the
proxies, and validate only the champions on the target.
"""

__version__ = "0.1.0"
