"""
Reference values (oracles) for validation
"""

from .oracles import hankel_oracle, naive_double_oracle, naive_single_oracle

__all__ = ["hankel_oracle", "naive_single_oracle", "naive_double_oracle"]
