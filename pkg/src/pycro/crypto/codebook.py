"""Public codebook mapping node identities to multiplicative plaintexts.

Parent indicators are encrypted under the multiplicative scheme, so node
identities need group-element representatives. Identity k (in a fixed
public ordering) becomes the embedded integer k+4; the reserved
no-parent marker takes 3; integers 1, 2 and 1/2 stay free for the
in-tree flag symbols. Everyone can build the same codebook from the
public node ordering, which is the point: it is a public encoding, not a
secret.
"""

from ..errors import PycroError

NULL_PARENT = None

_NULL_INT = 3
_FIRST_NODE_INT = 4


class NodeCodebook:
    def __init__(self, mul_scheme, node_ids):
        self._scheme = mul_scheme
        self.one = mul_scheme.identity
        self.two = mul_scheme.embed(2)
        self.half = mul_scheme.elem_inverse(self.two)
        self._to_elem = {NULL_PARENT: mul_scheme.embed(_NULL_INT)}
        for k, node in enumerate(node_ids):
            self._to_elem[node] = mul_scheme.embed(_FIRST_NODE_INT + k)
        self._from_elem = {e: n for n, e in self._to_elem.items()}
        if len(self._from_elem) != len(self._to_elem):
            raise PycroError("codebook embedding collision")

    def element(self, node):
        try:
            return self._to_elem[node]
        except KeyError:
            raise PycroError(f"{node!r} has no codebook entry") from None

    def node(self, element):
        try:
            return self._from_elem[element]
        except KeyError:
            raise PycroError("element decodes to no known node") from None

    def __contains__(self, element):
        return element in self._from_elem

    @property
    def elements(self):
        return frozenset(self._from_elem)
