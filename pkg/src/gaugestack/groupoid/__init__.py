"""Finite groupoids, functors, model-structure predicates and homotopy limits."""
from .core import (DEFAULT_MAX_ENUMERATION, ActionGroupoid, FiniteGroupoid, FullSubgroupoid,
                   Groupoid, GroupoidFunctor, GroupoidNatTrans, ProductGroupoid, connected_groupoid,
                   coproduct, delta1, discrete, empty, functors_equal, group_groupoid,
                   identity_functor, indiscrete, point, product, two_points)
from .groups import FiniteGroup, by_name, conjugacy_classes, cyclic, power, symmetric, trivial
from .homotopy import (CosimplicialGroupoid2, DescentGroupoid, FiberProduct, HomotopyFiberProduct,
                       J, Pushout, PushoutProduct, descent_comparison, fiber_product_comparison,
                       holim_descent, homotopy_fiber_product_grpd, pushout_along_cofibration,
                       pushout_product)
from .model import (Skeleton, find_lift, fibration_report, functor_groupoid, functors,
                    is_cofibration, is_fibration, is_fully_faithful, is_isomorphism,
                    is_weak_equivalence, lifting_counterexample, natural_transformations,
                    weak_equivalence_report)
