"""
Main module for the ellipsoid squeezer.
"""
from .cli import main

if __name__ == "__main__":
    main()
