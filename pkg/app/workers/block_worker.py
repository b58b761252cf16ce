"""
Per-block fan-out over a process pool.

Payloads cross the process boundary as plain JSON text (canonical scalar
strings), never as sympy objects.  Results are merged in multidegree order
regardless of completion order.
"""
import json
import logging
from multiprocessing import Pool
from typing import List, Optional, Sequence

from app.models.relation import BlockRelations, RelationKind, Side
from app.models.tensor import BraidingMatrix, Multidegree, block
from app.schemas.report import ElementTerm
from app.services import linalg_service
from app.utils.formatting import parse_scalar

logger = logging.getLogger(__name__)


def encode_braiding(braiding: BraidingMatrix) -> List[List[str]]:
    return [[str(q) for q in row] for row in braiding.entries]


def decode_braiding(entries: Sequence[Sequence[str]], origin: str = "free") -> BraidingMatrix:
    return BraidingMatrix(tuple(tuple(parse_scalar(q) for q in row) for row in entries), origin)


def compute_block(payload: str) -> str:
    """Worker entry point: one block of constants or pre-relations."""
    from app.services.relation_service import RelationService

    data = json.loads(payload)
    braiding = decode_braiding(data["entries"])
    service = RelationService(braiding, workers=1)
    found = service.compute_block(
        RelationKind(data["kind"]), data["degree"], Side(data["side"]), tuple(data["multidegree"])
    )
    if found is None:
        return json.dumps({"multidegree": data["multidegree"], "relations": [], "witnesses": []})
    return json.dumps({
        "multidegree": list(found.multidegree),
        "relations": [[t.model_dump() for t in ElementTerm.from_element(x)] for x in found.relations],
        "witnesses": [[t.model_dump() for t in ElementTerm.from_element(w)] for w in found.witnesses],
    })


def decode_block(n_letters: int, payload: str) -> Optional[BlockRelations]:
    data = json.loads(payload)
    if not data["relations"]:
        return None
    md: Multidegree = tuple(data["multidegree"])
    relations = tuple(
        ElementTerm.to_element([ElementTerm(**t) for t in terms]) for terms in data["relations"]
    )
    witnesses = tuple(
        ElementTerm.to_element([ElementTerm(**t) for t in terms]) for terms in data["witnesses"]
    )
    space = linalg_service.span_elements(block(n_letters, md), relations)
    return BlockRelations(md, space, relations, witnesses)


def run_blocks(
    braiding: BraidingMatrix,
    kind: RelationKind,
    n: int,
    side: Side,
    mds: Sequence[Multidegree],
    workers: int,
) -> List[Optional[BlockRelations]]:
    """Compute every block in ``mds`` on ``workers`` processes."""
    entries = encode_braiding(braiding)
    payloads = [
        json.dumps({
            "entries": entries,
            "kind": kind.value,
            "degree": n,
            "side": side.value,
            "multidegree": list(md),
        })
        for md in mds
    ]
    logger.info(f"Dispatching {len(payloads)} blocks of degree {n} to {workers} workers")
    try:
        with Pool(processes=workers) as pool:
            results = pool.map(compute_block, payloads)
    except KeyboardInterrupt:
        logger.info("Block workers interrupted")
        raise
    return [decode_block(braiding.size, r) for r in results]
