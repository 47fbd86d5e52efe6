"""Group-ring matrices, Stallings traces and EI-module algebra."""
from .group_ring import (GroupRing, GroupRingElement, GroupRingMatrix, TraceVector,
                         stallings_trace, augmentation, fox_derivative)
from .eimodules import (EICategory, EIModule, Bimodule, eimodule_compose, eimodule_shadow,
                        hom_bimodule, free_module, build_dual, verify_snake,
                        cyclic_group_category, sign_module, canonical_invariants)
