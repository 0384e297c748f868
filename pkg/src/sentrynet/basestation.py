"""Root-side ingestion and per-slot filtering of delivered tickets.

Each slot the root tallies (suspect, reporter) report counts and classifies
every reported suspect: many distinct reporters indicate a genuine attack; a
single reporter hammering the same suspect indicates a compromised reporter
flooding falsified tickets; anything else is treated as a false positive.
"""

from dataclasses import dataclass

GENUINE_ATTACK = "GA"
COMPROMISED_REPORT = "CA"
FALSE_POSITIVE = "FP"

DEFAULT_THETA_B = 2  # distinct-reporter threshold
DEFAULT_THETA_N = 3  # per-reporter count threshold
DEFAULT_ADMIN_DELAY_SLOTS = 1


class ReportMatrix:
    """Per-slot (suspect, reporter) -> count table, reset every slot."""

    def __init__(self, slot=0):
        self.slot = slot
        self.counts = {}

    def ingest(self, suspect_id, reporter_id):
        key = (suspect_id, reporter_id)
        self.counts[key] = self.counts.get(key, 0) + 1

    def roll(self, new_slot):
        self.slot = new_slot
        self.counts = {}

    def rows(self):
        """{suspect: {reporter: count}} view of the current slot."""
        out = {}
        for (s, r), c in self.counts.items():
            out.setdefault(s, {})[r] = c
        return out


@dataclass
class FilterVerdict:
    suspect_id: int
    verdict: str
    culprit_id: int | None = None  # reporter blamed for a compromised ticket


def filter_reports(matrix, theta_b=DEFAULT_THETA_B, theta_n=DEFAULT_THETA_N):
    """Classify every suspect with at least one report this slot.

    Per suspect: D = number of distinct reporters, M = max single-reporter
    count.  D > theta_b -> genuine attack; D < theta_b and M >= theta_n ->
    compromised report, blaming the reporter holding the max; everything
    else, including D == theta_b exactly, falls through to false positive
    (the literal branch structure; documented).
    """
    if theta_b < 1 or theta_n < 1:
        raise ValueError("thresholds must be >= 1")
    verdicts = []
    for suspect, row in sorted(matrix.rows().items()):
        reporters = {r: c for r, c in row.items() if c > 0}
        if not reporters:
            continue
        distinct = len(reporters)
        max_count = max(reporters.values())
        if distinct > theta_b:
            verdicts.append(FilterVerdict(suspect, GENUINE_ATTACK))
        elif distinct < theta_b and max_count >= theta_n:
            culprit = min(r for r, c in reporters.items() if c == max_count)
            verdicts.append(FilterVerdict(suspect, COMPROMISED_REPORT, culprit))
        else:
            verdicts.append(FilterVerdict(suspect, FALSE_POSITIVE))
    return verdicts


def revocation_target(verdict):
    """Node to silence for a verdict, or None when no action is warranted."""
    if verdict.verdict == GENUINE_ATTACK:
        return verdict.suspect_id
    if verdict.verdict == COMPROMISED_REPORT:
        return verdict.culprit_id
    return None
