from .descriptors import UnramifiedFieldDescriptor, EisensteinExtensionDescriptor
from .scalar import (Scalar, sc_add, sc_sub, sc_mul, sc_div, sc_inv, sc_neg,
                     sc_pow, sc_from_fraction, sc_from_int, sc_frobenius,
                     sc_apply_aut, sc_zero, sc_izero, sc_certified_zero)
from . import linalg
