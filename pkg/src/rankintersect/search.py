"""Exhaustive search over canonical [6,3] and [7,3] candidate systems in F_{q^5}^3.

Candidates are indexed globally per family: index = param_index * (Q^2 - 1) +
extension_index with Q = q^5, parameters encoded big-endian, and the extension
vector (0, alpha, beta) encoded as alpha * Q + beta - 1. Chunks are processed
in deterministic order, each completed chunk appends one checkpoint line, and
every stride-th candidate is re-decided by the generic hyperplane-pair scan.
"""

from __future__ import annotations

import json
import threading
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (
    ArityMismatch,
    CorruptCheckpoint,
    DimensionMismatch,
    InvalidParameters,
    InvalidRange,
    ZeroExtension,
)
from .fields import ExtField, make_extension_field
from .geometry import QSystem, SpannabilityWitness, is_2_spannable, validate_witness

FORM_ARITY = {1: 4, 2: 3, 3: 2}
DEFAULT_CHUNK_SIZE = 4096
DEFAULT_STRIDE = 10_000

# kernels allocate pair buffers quadratic in the point count; beyond this the
# generic python scan is used instead
KERNEL_MAX_Q = 3


def search_field(q: int) -> ExtField:
    return make_extension_field(q, 5)


def search_space_size(q: int, form_id: int) -> int:
    """(q^5)^arity * ((q^5)^2 - 1) candidates in the family."""
    if form_id not in FORM_ARITY:
        raise InvalidParameters(f"form_id must be 1, 2 or 3, got {form_id}")
    big_q = q**5
    return big_q ** FORM_ARITY[form_id] * (big_q * big_q - 1)


def decode_candidate(q: int, form_id: int, index: int) -> tuple[tuple[int, ...], int, int]:
    """Split a global candidate index into (params, alpha, beta)."""
    big_q = q**5
    n_ext = big_q * big_q - 1
    param_idx, ext_idx = divmod(index, n_ext)
    digits = []
    v = param_idx
    for _ in range(FORM_ARITY[form_id]):
        digits.append(v % big_q)
        v //= big_q
    params = tuple(reversed(digits))
    ev = ext_idx + 1
    return params, ev // big_q, ev % big_q


def canonical_system(field: ExtField, form_id: int, params: tuple[int, ...]) -> QSystem:
    """The dimension-5 system of one canonical family member.

    form 1: x -> (x, x^q + A x^{q^3} + B x^{q^4}, x^{q^2} + C x^{q^3} + D x^{q^4})
    form 2: x -> (x, x^q + A x^{q^2} + B x^{q^4}, x^{q^3} + C x^{q^4})
    form 3: x -> (x, x^{q^2} + A x^{q^4}, x^{q^3} + B x^{q^4})

    Raises InvalidParameters when the image fails the full-span condition
    (callers treat those candidates as skipped).
    """
    if field.m != 5:
        raise DimensionMismatch("canonical systems live over degree-5 extensions")
    arity = FORM_ARITY.get(form_id)
    if arity is None or len(params) != arity:
        raise ArityMismatch(f"form {form_id} takes {arity} parameters, got {len(params)}")
    f = field
    vectors = []
    for j in range(5):
        x = f.pow(f.alpha, j)
        fr = [f.frobenius(x, i) for i in range(5)]
        if form_id == 1:
            a, b, c, d = params
            sec = f.add(fr[1], f.add(f.mul(a, fr[3]), f.mul(b, fr[4])))
            thr = f.add(fr[2], f.add(f.mul(c, fr[3]), f.mul(d, fr[4])))
        elif form_id == 2:
            a, b, c = params
            sec = f.add(fr[1], f.add(f.mul(a, fr[2]), f.mul(b, fr[4])))
            thr = f.add(fr[3], f.mul(c, fr[4]))
        else:
            a, b = params
            sec = f.add(fr[2], f.mul(a, fr[4]))
            thr = f.add(fr[3], f.mul(b, fr[4]))
        vectors.append((x, sec, thr))
    return QSystem(field, 3, vectors, validate=True)


def extended_candidate(system: QSystem, alpha: int, beta: int) -> QSystem:
    """system + <(0, alpha, beta)>; the line X0 = 0 has weight 0 in the base system."""
    if alpha == 0 and beta == 0:
        raise ZeroExtension("the extension vector must be nonzero")
    return QSystem(system.field, 3, list(system.basis) + [(0, alpha, beta)],
                   validate=False)


# --- field tables for the kernels ------------------------------------------------


_TABLE_CACHE: dict[int, dict] = {}


def field_tables(q: int) -> dict:
    if q not in _TABLE_CACHE:
        f = search_field(q)
        big_q = f.order
        mul = np.zeros((big_q, big_q), np.int64)
        add = np.zeros((big_q, big_q), np.int64)
        for a in range(big_q):
            for b in range(big_q):
                mul[a, b] = f.mul(a, b)
                add[a, b] = f.add(a, b)
        neg = np.array([f.neg(a) for a in range(big_q)], np.int64)
        inv = np.array([0] + [f.inv(a) for a in range(1, big_q)], np.int64)
        invq = np.array([0] + [pow(a, q - 2, q) for a in range(1, q)], np.int64)
        frob = np.zeros((5, big_q), np.int64)
        for i in range(5):
            for a in range(big_q):
                frob[i, a] = f.frobenius(a, i)
        _TABLE_CACHE[q] = {
            "mul": mul, "add": add, "neg": neg, "inv": inv, "invq": invq, "frob": frob,
        }
    return _TABLE_CACHE[q]


def spannability_witness(system: QSystem) -> tuple[str, SpannabilityWitness | None]:
    """Specialized verdict for a dim-6 [*,3] system over F_{q^5}.

    Returns ("spannable", witness) or ("survivor", None); every witness is
    re-validated by the generic sum test.
    """
    if (system.field.m, system.k, system.n) != (5, 3, 6):
        raise DimensionMismatch(
            f"expected a [6,3] system over F_{{q^5}}, got n={system.n}, k={system.k}, m={system.field.m}"
        )
    q = system.field.q
    if q > KERNEL_MAX_Q:
        verdict, witness = is_2_spannable(system)
        return ("spannable", witness) if verdict else ("survivor", None)
    tables = field_tables(q)
    bx = np.array([v[0] for v in system.basis], np.int64)
    by = np.array([v[1] for v in system.basis], np.int64)
    bz = np.array([v[2] for v in system.basis], np.int64)
    witness_buf = np.zeros(8, np.int64)
    verdict = kernels.decide_single(bx, by, bz, q, tables["mul"], tables["add"],
                                    tables["neg"], tables["inv"], tables["invq"],
                                    witness_buf)
    if verdict == kernels.VERDICT_ERROR:
        raise AssertionError("kernel witness validation failed; this is a bug")
    if verdict == kernels.VERDICT_SURVIVOR:
        return "survivor", None
    witness = SpannabilityWitness(
        h1=(int(witness_buf[0]), int(witness_buf[1]), int(witness_buf[2])),
        h2=(int(witness_buf[3]), int(witness_buf[4]), int(witness_buf[5])),
        w1=int(witness_buf[6]),
        w2=int(witness_buf[7]),
    )
    if not validate_witness(system, witness):
        raise AssertionError("kernel witness failed the generic sum test; this is a bug")
    return "spannable", witness


# --- configuration and report -----------------------------------------------------


@dataclass(frozen=True)
class SearchTask:
    form_id: int
    start: int
    end: int


@dataclass
class SearchConfig:
    q: int = 2
    n: int = 6
    forms: tuple[int, ...] = (1, 2, 3)
    ranges: dict | None = None  # form_id -> (start, end); None means the full family
    threads: int = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE
    stride: int = DEFAULT_STRIDE
    checkpoint_path: str | None = None
    report_path: str | None = None


@dataclass
class SearchReport:
    config: dict
    space: dict
    results: dict
    totals: dict
    survivors: list
    checkpoint: dict
    run: dict

    def as_dict(self) -> dict:
        return {
            "schema": "rankintersect-search-report-v1",
            "config": self.config,
            "space": self.space,
            "results": self.results,
            "totals": self.totals,
            "survivors": self.survivors,
            "checkpoint": self.checkpoint,
            "run": self.run,
        }

    def deterministic_dict(self) -> dict:
        """The report minus volatile blocks (timings, lineage paths)."""
        out = self.as_dict()
        out.pop("run")
        out.pop("checkpoint")
        return out


# --- checkpoint file ----------------------------------------------------------------


def _checkpoint_header(q: int, n: int) -> str:
    return f"# rankintersect-search v1 q={q} n={n}"


def format_checkpoint_line(form_id: int, start: int, end: int, examined: int,
                           survivors: list[int]) -> str:
    prefix = f"{form_id},{start},{end},{examined},{';'.join(str(s) for s in survivors)}"
    crc = zlib.crc32(prefix.encode("ascii")) & 0xFFFFFFFF
    return f"{prefix},{crc:08x}"


def load_checkpoint(path: Path, q: int, n: int) -> dict[tuple[int, int, int], tuple[int, list[int]]]:
    """Map (form, start, end) -> (examined, survivors) from a checkpoint file."""
    completed: dict[tuple[int, int, int], tuple[int, list[int]]] = {}
    text = path.read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines:
        return completed
    if lines[0] != _checkpoint_header(q, n):
        raise CorruptCheckpoint(
            f"checkpoint header mismatch: {lines[0]!r} (expected q={q}, n={n})"
        )
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.rsplit(",", 1)
        if len(parts) != 2:
            raise CorruptCheckpoint(f"malformed checkpoint line {lineno}")
        prefix, crc_text = parts
        try:
            crc = int(crc_text, 16)
        except ValueError as exc:
            raise CorruptCheckpoint(f"bad crc on line {lineno}") from exc
        if zlib.crc32(prefix.encode("ascii")) & 0xFFFFFFFF != crc:
            raise CorruptCheckpoint(f"crc mismatch on checkpoint line {lineno}")
        fields = prefix.split(",")
        if len(fields) != 5:
            raise CorruptCheckpoint(f"malformed checkpoint line {lineno}")
        form_id, start, end, examined = (int(fields[0]), int(fields[1]),
                                         int(fields[2]), int(fields[3]))
        survivors = [int(s) for s in fields[4].split(";") if s]
        completed[(form_id, start, end)] = (examined, survivors)
    return completed


# --- generic (python) candidate decision ---------------------------------------------


def _python_decide(field: ExtField, form_id: int, index: int, n: int) -> tuple[int, list[int]]:
    """Generic-verdict fallback: (verdict code, witness-free).

    Used for q beyond the kernel limit and for the n = 7 confirmation mode,
    where each dim-6 candidate is further extended by the smallest-encoding
    independent vector (0, a2, b2).
    """
    params, alpha, beta = decode_candidate(field.q, form_id, index)
    try:
        base = canonical_system(field, form_id, params)
    except InvalidParameters:
        return kernels.VERDICT_SKIPPED, []
    system = extended_candidate(base, alpha, beta)
    if n == 7:
        from .geometry import expand_vector

        big_q = field.order
        chosen = None
        for v in range(1, big_q * big_q):
            a2, b2 = v // big_q, v % big_q
            if not system.expanded().contains(expand_vector(field, (0, a2, b2))):
                chosen = (0, a2, b2)
                break
        system = QSystem(field, 3, list(system.basis) + [chosen], validate=False)
    verdict, _ = is_2_spannable(system)
    return (kernels.VERDICT_SPANNABLE if verdict else kernels.VERDICT_SURVIVOR), []


def _python_process_range(field: ExtField, form_id: int, start: int, end: int,
                          stride: int, n: int):
    examined = skipped = spannable = 0
    survivors: list[int] = []
    stride_records: list[tuple[int, int]] = []
    for idx in range(start, end):
        verdict, _ = _python_decide(field, form_id, idx, n)
        if verdict == kernels.VERDICT_SKIPPED:
            skipped += 1
        else:
            examined += 1
            if verdict == kernels.VERDICT_SPANNABLE:
                spannable += 1
            else:
                survivors.append(idx)
        if stride > 0 and idx % stride == 0:
            stride_records.append((idx, verdict))
    return examined, skipped, spannable, survivors, stride_records


# --- the runner -----------------------------------------------------------------------


def _plan_chunks(config: SearchConfig) -> list[SearchTask]:
    tasks = []
    for form_id in sorted(config.forms):
        size = search_space_size(config.q, form_id)
        if config.ranges and config.ranges.get(form_id) is not None:
            start, end = config.ranges[form_id]
        else:
            start, end = 0, size
        if not (0 <= start <= end <= size):
            raise InvalidRange(
                f"range [{start}, {end}) outside form {form_id} space of size {size}"
            )
        pos = start
        while pos < end:
            stop = min(pos + config.chunk_size, end)
            tasks.append(SearchTask(form_id, pos, stop))
            pos = stop
    return tasks


def _run_chunk_kernel(config: SearchConfig, tables: dict, task: SearchTask):
    max_stride = (task.end - task.start) // config.stride + 2 if config.stride > 0 else 1
    surv_out = np.empty(task.end - task.start, np.int64)
    stride_idx = np.empty(max_stride, np.int64)
    stride_verdict = np.empty(max_stride, np.int64)
    examined, skipped, spannable, nsurv, nstride, error_idx = kernels.process_range(
        config.q, task.form_id, task.start, task.end, config.stride,
        tables["mul"], tables["add"], tables["neg"], tables["inv"],
        tables["invq"], tables["frob"],
        surv_out, stride_idx, stride_verdict,
    )
    if error_idx >= 0:
        raise AssertionError(
            f"kernel witness validation failed at candidate {error_idx} of form {task.form_id}"
        )
    survivors = [int(s) for s in surv_out[:nsurv]]
    stride_records = [(int(stride_idx[i]), int(stride_verdict[i])) for i in range(nstride)]
    return examined, skipped, spannable, survivors, stride_records


def _verify_stride_records(field: ExtField, form_id: int, records, n: int) -> int:
    """Re-decide stride candidates with the generic scan; raise on any mismatch."""
    checked = 0
    for idx, kernel_verdict in records:
        generic_verdict, _ = _python_decide(field, form_id, idx, n)
        if generic_verdict != kernel_verdict:
            raise AssertionError(
                f"oracle disagreement at form {form_id} candidate {idx}: "
                f"kernel={kernel_verdict}, generic={generic_verdict}"
            )
        checked += 1
    return checked


def run_search(config: SearchConfig) -> SearchReport:
    """Process the configured families in deterministic chunk order, resumably."""
    if config.n not in (6, 7):
        raise InvalidParameters("the search handles n = 6 (full) and n = 7 (confirmation)")
    t0 = time.perf_counter()
    field = search_field(config.q)
    use_kernel = config.q <= KERNEL_MAX_Q and config.n == 6
    tables = field_tables(config.q) if use_kernel else None
    tasks = _plan_chunks(config)

    completed: dict[tuple[int, int, int], tuple[int, list[int]]] = {}
    checkpoint_file = None
    resumed = 0
    if config.checkpoint_path:
        path = Path(config.checkpoint_path)
        if path.exists() and path.stat().st_size > 0:
            completed = load_checkpoint(path, config.q, config.n)
            resumed = len(completed)
            checkpoint_file = path.open("a", encoding="ascii")
        else:
            checkpoint_file = path.open("w", encoding="ascii")
            checkpoint_file.write(_checkpoint_header(config.q, config.n) + "\n")
            checkpoint_file.flush()

    chunk_stats: dict[tuple[int, int, int], tuple[int, list[int]]] = {}
    stride_checked = 0
    chunks_run = 0
    to_run = [t for t in tasks if (t.form_id, t.start, t.end) not in completed]
    write_lock = threading.Lock()
    pending: dict[tuple[int, int, int], tuple[int, list[int]]] = {}
    emit_order = [(t.form_id, t.start, t.end) for t in to_run]
    emit_pos = 0

    def commit(key, examined, survivors):
        """Append checkpoint lines strictly in planned chunk order."""
        nonlocal emit_pos
        with write_lock:
            pending[key] = (examined, survivors)
            while emit_pos < len(emit_order) and emit_order[emit_pos] in pending:
                k = emit_order[emit_pos]
                ex, surv = pending.pop(k)
                if checkpoint_file is not None:
                    checkpoint_file.write(format_checkpoint_line(k[0], k[1], k[2], ex, surv) + "\n")
                    checkpoint_file.flush()
                emit_pos += 1

    def work(task: SearchTask):
        if use_kernel:
            return task, _run_chunk_kernel(config, tables, task)
        return task, _python_process_range(field, task.form_id, task.start, task.end,
                                           config.stride, config.n)

    try:
        if config.threads > 1 and len(to_run) > 1:
            with ThreadPoolExecutor(max_workers=config.threads) as pool:
                futures = [pool.submit(work, t) for t in to_run]
                for fut in futures:
                    task, (examined, skipped, spannable, survivors, records) = fut.result()
                    key = (task.form_id, task.start, task.end)
                    chunk_stats[key] = (examined, survivors)
                    stride_checked += _verify_stride_records(field, task.form_id, records, config.n)
                    commit(key, examined, survivors)
                    chunks_run += 1
        else:
            for task in to_run:
                _, (examined, skipped, spannable, survivors, records) = work(task)
                key = (task.form_id, task.start, task.end)
                chunk_stats[key] = (examined, survivors)
                stride_checked += _verify_stride_records(field, task.form_id, records, config.n)
                commit(key, examined, survivors)
                chunks_run += 1
    finally:
        if checkpoint_file is not None:
            checkpoint_file.close()

    # aggregate over the planned chunks (resumed ones come from the checkpoint)
    results = {}
    all_survivors = []
    totals = {"candidates": 0, "examined": 0, "skipped": 0, "spannable": 0, "survivors": 0}
    for form_id in sorted(config.forms):
        form_tasks = [t for t in tasks if t.form_id == form_id]
        if not form_tasks:
            continue
        start = min(t.start for t in form_tasks)
        end = max(t.end for t in form_tasks)
        examined = 0
        survivors: list[int] = []
        for t in form_tasks:
            key = (t.form_id, t.start, t.end)
            ex, surv = chunk_stats.get(key) or completed[key]
            examined += ex
            survivors.extend(surv)
        survivors.sort()
        candidates = end - start
        results[str(form_id)] = {
            "range": [start, end],
            "candidates": candidates,
            "examined": examined,
            "skipped": candidates - examined,
            "spannable": examined - len(survivors),
            "survivors": survivors,
        }
        totals["candidates"] += candidates
        totals["examined"] += examined
        totals["skipped"] += candidates - examined
        totals["spannable"] += examined - len(survivors)
        totals["survivors"] += len(survivors)
        for idx in survivors:
            params, alpha, beta = decode_candidate(config.q, form_id, idx)
            all_survivors.append({
                "form": form_id,
                "index": idx,
                "params": list(params),
                "alpha": alpha,
                "beta": beta,
            })
    all_survivors.sort(key=lambda s: (s["form"], s["index"]))

    report = SearchReport(
        config={
            "q": config.q,
            "n": config.n,
            "forms": sorted(config.forms),
            "ranges": {k: v["range"] for k, v in results.items()},
            "chunk_size": config.chunk_size,
            "stride": config.stride,
            "modulus": list(field.modulus),
        },
        space={str(f): search_space_size(config.q, f) for f in sorted(config.forms)},
        results=results,
        totals=totals,
        survivors=all_survivors,
        checkpoint={"path": config.checkpoint_path},
        run={
            "wall_time_s": round(time.perf_counter() - t0, 3),
            "chunks_processed": chunks_run,
            "resumed_chunks": resumed,
            "stride_checks": stride_checked,
            "stride_mismatches": 0,
            "threads": config.threads,
        },
    )
    if config.report_path:
        Path(config.report_path).write_text(
            json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    return report
