from .tower import Element, Layer, Tower, normalize, parse_element, parse_tower

__all__ = ["Element", "Layer", "Tower", "normalize", "parse_element", "parse_tower"]
