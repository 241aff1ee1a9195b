"""Judge-driven claim extraction, ground-truth matching, and divergence clustering.

A judge is any callable ``(system, user) -> reply``. Each request is tried
once more with a format reminder when the reply cannot be parsed; a second
failure raises :class:`JudgeFormatError`.
"""

from __future__ import annotations

import hashlib
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable, Iterable

from umwelt_lab.ensemble.coverage import CoverageMatrix
from umwelt_lab.errors import DataError, JudgeFormatError

Judge = Callable[[str, str], str]

JUDGE_SYSTEM = "You are a meticulous software-review assistant. Follow the requested reply format exactly."
PROMPT_NAMES = ("judge_extract", "judge_match", "judge_cluster", "judge_reminder")


def load_prompt(name: str) -> str:
    return resources.files("umwelt_lab.data").joinpath("prompts", f"{name}.txt").read_text("utf-8")


def prompt_hashes() -> dict[str, str]:
    """SHA-256 of every shipped judge prompt, for audit trails in reports."""
    return {n: hashlib.sha256(load_prompt(n).encode("utf-8")).hexdigest() for n in PROMPT_NAMES}


@dataclass(frozen=True)
class Finding:
    id: str
    problem_id: str
    description: str


@dataclass(frozen=True)
class Claim:
    agent: str
    problem_id: str
    text: str
    matched_finding: str | None = None


def _ask(judge: Judge, user: str, parse: Callable[[str], object], task: str, context: dict):
    replies = []
    for prompt in (user, user + "\n\n" + load_prompt("judge_reminder")):
        reply = judge(JUDGE_SYSTEM, prompt)
        replies.append(reply)
        parsed = parse(reply)
        if parsed is not None:
            return parsed
    raise JudgeFormatError(task, replies, context)


_ITEM = re.compile(r"^\s*(\d+)[.)]\s+(\S.*?)\s*$")


def parse_claim_list(reply: str) -> list[str] | None:
    """Numbered list → claim texts; ``NONE`` → []; anything else → None."""
    lines = [ln for ln in reply.strip().splitlines() if ln.strip()]
    if len(lines) == 1 and lines[0].strip().strip(".").upper() == "NONE":
        return []
    claims = []
    for expected, line in enumerate(lines, start=1):
        m = _ITEM.match(line)
        if m is None or int(m.group(1)) != expected:
            return None
        claims.append(m.group(2))
    return claims or None


def _verdict(yes: str, no: str) -> Callable[[str], bool | None]:
    def parse(reply: str) -> bool | None:
        word = reply.strip().strip(".!*").upper()
        return True if word == yes else False if word == no else None

    return parse


def extract_claims(agent_output: str, problem_id: str, agent: str, judge: Judge) -> list[Claim]:
    if not agent_output or not agent_output.strip():
        return []
    user = load_prompt("judge_extract").format(problem_id=problem_id, agent_output=agent_output.strip())
    texts = _ask(judge, user, parse_claim_list, "extract_claims", {"agent": agent, "problem_id": problem_id})
    return [Claim(agent, problem_id, t) for t in texts]


def match_ground_truth(
    claims: list[Claim], findings: list[Finding], judge: Judge
) -> tuple[list[Claim], dict[str, bool]]:
    """Judge every claim against every finding of its problem.

    Returns the claims annotated with their first matched finding and a
    finding-id → covered map (covered when at least one claim matches).
    """
    problems = {c.problem_id for c in claims}
    for c in claims:
        if not any(f.problem_id == c.problem_id for f in findings):
            raise DataError(f"claim for problem {c.problem_id!r} has no findings to match against")
    if len(problems) > 1:
        raise DataError("claims must share a single problem")
    row = {f.id: False for f in findings}
    template = load_prompt("judge_match")
    out = []
    for claim in claims:
        first = None
        for f in findings:
            if f.problem_id != claim.problem_id:
                continue
            user = template.format(finding=f.description, claim=claim.text)
            if _ask(judge, user, _verdict("YES", "NO"), "match_ground_truth", {"finding": f.id, "claim": claim.text}):
                row[f.id] = True
                first = first or f.id
        out.append(replace(claim, matched_finding=first))
    return out, row


@dataclass
class Cluster:
    problem_id: str
    claims: list[Claim]

    @property
    def agents(self) -> list[str]:
        return sorted({c.agent for c in self.claims})

    @property
    def id(self) -> str:
        digest = hashlib.sha256("\n".join(sorted(f"{c.agent}:{c.text}" for c in self.claims)).encode()).hexdigest()
        return f"{self.problem_id}:{digest[:10]}"

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "problem_id": self.problem_id,
            "agents": self.agents,
            "claims": [{"agent": c.agent, "text": c.text} for c in self.claims],
        }


@dataclass
class DivergenceMap:
    convergent: list[Cluster] = field(default_factory=list)
    unique: list[Cluster] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "convergent": [c.to_dict() for c in self.convergent],
            "unique": [c.to_dict() for c in self.unique],
        }

    def as_matrix(self) -> CoverageMatrix:
        """Agents × claim-clusters incidence, the alternative basis for Jaccard overlap."""
        clusters = self.convergent + self.unique
        agents = sorted({a for c in clusters for a in c.agents})
        return CoverageMatrix.build(
            agents, [c.id for c in clusters], ([a in c.agents for c in clusters] for a in agents)
        )


def divergence_map(claims: Iterable[Claim], judge: Judge) -> DivergenceMap:
    """Cluster claims per problem; a cluster asserted by two or more agents is convergent.

    Claims are visited in (problem, agent, text) order and join the first
    cluster whose founding claim the judge calls SAME.
    """
    template = load_prompt("judge_cluster")
    by_problem: dict[str, list[Claim]] = {}
    for c in sorted(claims, key=lambda c: (c.problem_id, c.agent, c.text)):
        by_problem.setdefault(c.problem_id, []).append(c)
    result = DivergenceMap()
    for problem in sorted(by_problem):
        clusters: list[Cluster] = []
        for claim in by_problem[problem]:
            for cluster in clusters:
                user = template.format(first=cluster.claims[0].text, second=claim.text)
                ctx = {"problem_id": problem, "claim": claim.text}
                if _ask(judge, user, _verdict("SAME", "DIFFERENT"), "divergence_map", ctx):
                    cluster.claims.append(claim)
                    break
            else:
                clusters.append(Cluster(problem, [claim]))
        for cl in clusters:
            (result.convergent if len(cl.agents) >= 2 else result.unique).append(cl)
    return result


@dataclass
class PipelineResult:
    matrix: CoverageMatrix
    claims: list[Claim]
    failures: list[dict]


def build_coverage(
    outputs: dict[tuple[str, str], str],
    findings: list[Finding],
    judge: Judge,
    agents: list[str] | None = None,
    max_workers: int = 8,
) -> PipelineResult:
    """Extract and match claims for every (agent, problem) output, concurrently.

    A judge format failure leaves that pair's findings uncovered and is
    recorded in ``failures`` instead of aborting the whole matrix.
    """
    agents = agents or sorted({a for a, _ in outputs})
    by_problem: dict[str, list[Finding]] = {}
    for f in findings:
        by_problem.setdefault(f.problem_id, []).append(f)

    def work(pair):
        agent, problem = pair
        try:
            claims = extract_claims(outputs[pair], problem, agent, judge)
            claims, row = match_ground_truth(claims, by_problem.get(problem, []), judge)
            return pair, claims, row, None
        except JudgeFormatError as exc:
            return pair, [], {}, exc.as_record()

    pairs = sorted(outputs)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(work, pairs))
    covered = {a: set() for a in agents}
    all_claims, failures = [], []
    for (agent, _), claims, row, failure in results:
        all_claims.extend(claims)
        covered.setdefault(agent, set()).update(f for f, hit in row.items() if hit)
        if failure is not None:
            failures.append(failure)
    ids = [f.id for f in findings]
    matrix = CoverageMatrix.build(agents, ids, ([f in covered[a] for f in ids] for a in agents))
    return PipelineResult(matrix, all_claims, failures)


def endpoint_judge(endpoint, retry=None) -> Judge:
    """Judge backed by a chat endpoint at temperature 0."""
    from umwelt_lab.runner.client import ChatClient, RetryPolicy

    client = ChatClient(endpoint, retry or RetryPolicy())
    return lambda system, user: client.complete(system, user, 0.0)
