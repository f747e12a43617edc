"""Exact quadratic-form, quaternion and involution calculus over field towers."""
