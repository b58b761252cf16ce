"""
Command line entry point: ``python -m app.main <command> ...``.

Reports go to stdout as JSON lines, logs go to stderr.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ValidationError

from app.core.config import settings
from app.models.forms import QuadraticForm, ThetaForm
from app.models.relation import BlockRelations, RelationKind, RelationSet, Side
from app.models.tensor import block
from app.schemas.job import JobConfig
from app.schemas.matrix import MatrixFile
from app.schemas.report import (
    BalanceReport,
    BlockBalanceReport,
    BlockDimension,
    BlockReport,
    DegreeReport,
    DimensionReport,
    ElementTerm,
    RelationTable,
    SpecializationReport,
    SuiteReport,
    WitnessReport,
)
from app.services import linalg_service
from app.services.degree_service import enumerate_E, zero_blocks
from app.services.identity_service import IdentityService, run_identity_suites
from app.services.relation_service import RelationService
from app.services.specialization_service import (
    braiding_from_file,
    cartan_from_file,
    r_minus_witness,
    serre_ideal_member,
    specialize_element,
)
from app.utils.exceptions import (
    BadParameters,
    MatrixFileError,
    NicholsException,
    VerificationFailure,
)

logger = logging.getLogger(__name__)


def _emit(report: BaseModel):
    print(json.dumps(report.model_dump(mode="json", exclude_none=True)), flush=True)


def load_matrix(path: str) -> MatrixFile:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise MatrixFileError(f"Cannot read matrix file {path}: {e}")
    try:
        return MatrixFile.model_validate_json(text)
    except ValidationError as e:
        raise MatrixFileError(f"Invalid matrix file {path}: {e.errors()[0]['msg']}")


def load_relation_table(path: str) -> Tuple[MatrixFile, RelationSet]:
    """Read a relation table written by ``relations`` and re-verify every relation."""
    try:
        lines = [line for line in Path(path).read_text().splitlines() if line.strip()]
    except OSError as e:
        raise MatrixFileError(f"Cannot read relation table {path}: {e}")
    if not lines:
        raise MatrixFileError(f"Relation table {path} is empty")
    try:
        tables = [RelationTable.model_validate_json(line) for line in lines]
    except ValidationError as e:
        raise MatrixFileError(f"Invalid relation table {path}: {e.errors()[0]['msg']}")

    first = tables[0]
    for table in tables[1:]:
        if (table.matrix, table.degree, table.side, table.kind) != (first.matrix, first.degree, first.side, first.kind):
            raise MatrixFileError(f"Relation table {path} mixes matrices, degrees or sides")

    n_letters = first.matrix.size
    blocks = []
    for table in tables:
        for report in table.blocks:
            md = tuple(report.multidegree)
            if len(md) != n_letters or sum(md) != first.degree:
                raise MatrixFileError(f"Block {list(md)} does not fit degree {first.degree}")
            b = block(n_letters, md)
            relations = tuple(ElementTerm.to_element(terms) for terms in report.relations)
            witnesses = tuple(ElementTerm.to_element(terms) for terms in report.witnesses)
            for x in relations + witnesses:
                stray = [word for word in x.words() if word not in b.index]
                if stray:
                    raise MatrixFileError(f"Word {list(stray[0])} does not belong to block {list(md)}")
            space = linalg_service.span_elements(b, relations)
            blocks.append(BlockRelations(md, space, relations, witnesses))
    relation_set = RelationSet(
        Side(first.side), RelationKind(first.kind), first.degree, tuple(sorted(blocks, key=lambda b: b.multidegree))
    )
    RelationService(braiding_from_file(first.matrix)).verify_relations(relation_set)
    return first.matrix, relation_set


def _block_report(b: BlockRelations, redundant: Optional[List[int]] = None) -> BlockReport:
    return BlockReport(
        multidegree=list(b.multidegree),
        relations=[ElementTerm.from_element(x) for x in b.relations],
        witnesses=[ElementTerm.from_element(w) for w in b.witnesses],
        display=[x.format("F") for x in b.relations],
        redundant=redundant,
    )


def _relation_set(job: JobConfig) -> Tuple[MatrixFile, RelationSet]:
    if job.table is not None:
        return load_relation_table(job.table)
    service = RelationService(braiding_from_file(job.matrix))
    side = Side(job.side)
    if job.constants:
        return job.matrix, service.constants(job.degree, side)
    return job.matrix, service.prerelations(job.degree, side)


def cmd_check_identities(job: JobConfig, args: argparse.Namespace):
    suites = IdentityService.select(args.suite or (), args.operator or ())
    results = run_identity_suites(job.strands, job.seed, count=args.count, n_letters=args.letters, suites=suites)
    for suite in results:
        _emit(SuiteReport(suite=suite.suite, checks=suite.checks, passed=suite.passed, failures=suite.failures))
    failed = [suite.suite for suite in results if not suite.passed]
    if failed:
        raise VerificationFailure(f"Identity suites failed: {', '.join(failed)}")


def cmd_relations(job: JobConfig):
    service = RelationService(braiding_from_file(job.matrix))
    side = Side(job.side)
    compute = service.constants if job.constants else service.prerelations
    current = compute(job.degree, side)

    flagged = {}
    if job.redundancy:
        lower = [compute(d, side) for d in range(2, job.degree)]
        for degree, md, index in service.redundant_relations(lower + [current]):
            if degree == job.degree:
                flagged.setdefault(md, []).append(index)

    for b in current.blocks:
        report = _block_report(b, flagged.get(b.multidegree, []) if job.redundancy else None)
        _emit(RelationTable(
            matrix=job.matrix,
            degree=job.degree,
            side=side.value,
            kind=current.kind.value,
            blocks=[report],
        ))


def cmd_degrees(job: JobConfig):
    tf = ThetaForm.from_braiding(braiding_from_file(job.matrix))
    if not tf.uniform_diagonal:
        # no quadratic form; report the twist-fixed blocks directly
        logger.warning(f"Diagonal exponents {list(tf.diagonal)} are not uniform; listing fixed blocks only")
        _emit(DegreeReport(
            points=[list(x) for x in zero_blocks(tf, job.max_height)],
            truncated_at=job.max_height,
        ))
        return
    result = enumerate_E(QuadraticForm.from_theta(tf), height=job.max_height, nonnegative=not job.all_integers)
    _emit(DegreeReport(
        semipositive=result.semipositive,
        points=[list(x) for x in result.points],
        truncated_at=result.truncated_at,
    ))


def cmd_specialize(job: JobConfig):
    matrix, relation_set = _relation_set(job)
    cartan = cartan_from_file(matrix)
    for b in relation_set.blocks:
        for x in b.relations:
            u = specialize_element(x)
            member = serre_ideal_member(cartan, u, relation_set.degree) if cartan is not None else None
            _emit(SpecializationReport(
                multidegree=list(b.multidegree),
                relation=x.format("F"),
                specialized=str(u),
                serre_member=member,
            ))


def cmd_witness(job: JobConfig):
    matrix, relation_set = _relation_set(job)
    cartan = cartan_from_file(matrix)
    if cartan is None:
        raise BadParameters("The witness search needs a Cartan matrix")
    for b in relation_set.blocks:
        for x in b.relations:
            u = specialize_element(x)
            result = r_minus_witness(cartan, u, job.depth)
            _emit(WitnessReport(
                multidegree=list(b.multidegree),
                relation=x.format("F"),
                specialized=str(u),
                verdict=result.verdict.value,
                chain=list(result.chain),
                terminal=str(result.terminal) if result.terminal is not None else None,
                h_residues=[str(h) for h in result.h_residues],
            ))


def cmd_dims(job: JobConfig):
    service = RelationService(braiding_from_file(job.matrix))
    for dims in service.nichols_dims(job.max_height):
        _emit(DimensionReport(
            degree=dims.degree,
            total=dims.total,
            blocks=[BlockDimension(multidegree=list(md), dimension=d) for md, d in sorted(dims.blocks.items())],
        ))


def cmd_balance(job: JobConfig):
    service = RelationService(braiding_from_file(job.matrix))
    kind = RelationKind.CONSTANT if job.constants else RelationKind.PRERELATION
    report = service.balance_check(job.degree, kind)
    _emit(BalanceReport(
        degree=job.degree,
        kind=kind.value,
        blocks=[
            BlockBalanceReport(multidegree=list(b.multidegree), right=b.right_dimension, left=b.left_dimension, balanced=b.balanced)
            for b in report
        ],
    ))
    unbalanced = [b.multidegree for b in report if not b.balanced]
    if unbalanced:
        raise VerificationFailure(f"Garside image differs from the left set on blocks {unbalanced}")


COMMANDS = {
    "relations": cmd_relations,
    "degrees": cmd_degrees,
    "specialize": cmd_specialize,
    "witness": cmd_witness,
    "dims": cmd_dims,
    "balance": cmd_balance,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nichols", description=settings.APP_NAME)
    sub = parser.add_subparsers(dest="command", required=True)

    identities = sub.add_parser("check-identities", help="braid and calculus identity suites")
    identities.add_argument("--n", type=int, default=4, help="number of strands")
    identities.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    identities.add_argument("--letters", type=int, default=2, help="rank of the random braidings")
    identities.add_argument("--count", type=int, default=None, help="number of random braidings")
    identities.add_argument("--suite", action="append", choices=IdentityService.SUITES, help="run only this suite")
    identities.add_argument("--operator", action="append", help="run the suites that check this operator")

    relations = sub.add_parser("relations", help="constants or pre-relations of one degree")
    relations.add_argument("--matrix", required=True)
    relations.add_argument("--degree", type=int, required=True)
    relations.add_argument("--side", choices=["right", "left"], default="right")
    relations.add_argument("--constants", action="store_true")
    relations.add_argument("--redundancy", action="store_true", help="flag relations generated by lower degrees")

    degrees = sub.add_parser("degrees", help="candidate relation degrees")
    degrees.add_argument("--matrix", required=True)
    degrees.add_argument("--max", dest="max_height", type=int, default=settings.ENUMERATION_HEIGHT)
    degrees.add_argument("--all-integers", action="store_true")

    for name in ("specialize", "witness"):
        p = sub.add_parser(name, help=f"{name} the pre-relations of one degree")
        p.add_argument("--matrix")
        p.add_argument("--table", help="relation table written by 'relations'")
        p.add_argument("--degree", type=int)
        p.add_argument("--constants", action="store_true")
        if name == "witness":
            p.add_argument("--depth", type=int, default=settings.WITNESS_DEPTH)

    dims = sub.add_parser("dims", help="Nichols algebra dimensions per block")
    dims.add_argument("--matrix", required=True)
    dims.add_argument("--max", dest="max_height", type=int, required=True)

    balance = sub.add_parser("balance", help="Garside image of right against left relations")
    balance.add_argument("--matrix", required=True)
    balance.add_argument("--degree", type=int, required=True)
    balance.add_argument("--constants", action="store_true")
    return parser


def _job(args: argparse.Namespace) -> JobConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None and k in JobConfig.model_fields}
    if args.command == "check-identities":
        fields["strands"] = args.n
    if getattr(args, "matrix", None) is not None:
        fields["matrix"] = load_matrix(args.matrix)
    try:
        return JobConfig(**fields)
    except ValidationError as e:
        raise BadParameters(e.errors()[0]["msg"])


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = _job(args)
        logger.info(f"Running {job.command}")
        if job.command == "check-identities":
            cmd_check_identities(job, args)
        else:
            COMMANDS[job.command](job)
    except NicholsException as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        return e.exit_code
    return 0


def main():
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    sys.exit(run())


if __name__ == "__main__":
    main()
