"""Progressive part assembly: pose prediction for ordered part point clouds.

Subpackages and modules:

- ``autodiff``: float64 tensors with reverse-mode differentiation and Adam.
- ``kernels``: compiled/numpy nearest-neighbor and sampling kernels.
- ``geometry``: canonicalization, rigid transforms, chamfer, contacts.
- ``model``: the recurrent graph network and its checkpoint format.
- ``losses``: chamfer-based training objectives and min-over-samples search.
- ``metrics``: assembly evaluation (shape chamfer, part/connectivity accuracy).
- ``dataset``: synthetic part-decomposed shapes, ordering and serialization.
- ``cli``: batch entry points (``partasm gen-data|train|eval|ablate|export|gradcheck``).
"""

__version__ = "0.1.0"
