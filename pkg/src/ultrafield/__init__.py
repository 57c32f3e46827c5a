"""Exact Levi-Civita and p-adic Levi-Civita arithmetic with ultrametric embeddings."""
from .embed import (
    EmbedCertificate, EmbedState, broughan_embed, check_certificate, embed_space, stream_embed,
)
from .errors import *  # noqa: F401,F403
from .hahn import Series, dist_valuation, monomial
from .padic_hahn import PadicSeries, normalize, pseries_invert
from .umetric import SENTINEL, UltraSpace, random_ultrametric, sentinel_extend, verify_ultrametric
from .urysohn import Alphabet, UrysohnPoint, delta, injective_extend, petal_distance, to_urysohn
from .valuecore import INF, EqualChar, ExponentSet, Generator, MixedChar, PrimeField, exponent
from .witt import PadicInt, teich_digits, teichmuller

__version__ = "0.1.0"
