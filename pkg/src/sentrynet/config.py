"""Scenario configuration: defaults, flat key=value files, and validation.

A config file is plain ``key = value`` lines with ``#`` comments and no
nesting.  Command-line overrides beat file values, which beat built-in
defaults.  Unknown keys are rejected, not ignored.
"""

from dataclasses import dataclass, field, fields

from .attacks import AttackPlan, ATTACK_KINDS, DEFAULT_HELLO_INTERVAL
from .basestation import DEFAULT_THETA_B, DEFAULT_THETA_N, DEFAULT_ADMIN_DELAY_SLOTS
from .tickets import REFRACTORY_SLOTS, REPORT_HOLD_SLOTS, TICKET_TTL_SLOTS

AREA_BY_SIZE = {25: 100.0, 50: 200.0, 100: 400.0}


@dataclass
class ScenarioConfig:
    # world
    node_count: int = 25
    area_side: float = 0.0          # 0 -> size default (100/200/400 m)
    tx_range: float = 50.0
    traffic_period: float = 4.0     # seconds between app packets per node
    slot_seconds: float = 20.0
    sim_duration: float = 14400.0
    seed: int = 1

    # defense
    defense_enabled: bool = True
    alpha: float = 0.75
    k: float = 6.0
    gamma: float = 0.2
    m: int = 200
    sigma_sq: float = 0.1225        # kernel bandwidth; see README on the 0.35 figure
    tau_max: float = 1e6
    alpha_ewma: float = 0.3
    warmup_slots: int = 12
    refractory_slots: int = REFRACTORY_SLOTS
    report_hold_slots: int = REPORT_HOLD_SLOTS
    ticket_ttl_slots: int = TICKET_TTL_SLOTS
    theta_b: int = DEFAULT_THETA_B
    theta_n: int = DEFAULT_THETA_N
    admin_delay_slots: int = DEFAULT_ADMIN_DELAY_SLOTS

    # metric normalization (per-neighbour scales frozen after warm-up)
    tx_scale_factor: float = 28.0
    ratio_scale_factor: float = 4.0
    ratio_scale_floor: float = 0.5
    rank_scale_factor: float = 0.55
    rank_scale_fallback: float = 16.0

    # routing / link model
    hysteresis: float = 0.5
    root_rank: float = 0.0
    link_p_override: float = -1.0   # fixed delivery probability; <0 -> distance model
    beacon_min_ms: float = 512.0
    beacon_max_ms: float = 1024.0

    # attack
    attack_kind: str = "none"
    attacker_ids: list = field(default_factory=list)
    attacker_count: int = 1
    attack_start: float = -1.0      # <0 -> size default (1200 s / 2400 s)
    hello_interval: float = DEFAULT_HELLO_INTERVAL

    # measurement / logging
    measure_skip: float = 600.0     # warm-up cut before metrics are counted
    log_trust: str = "flags"        # off | flags | full
    admin_script: list = field(default_factory=list)  # (time, command, args...) tuples

    def attack_plan(self):
        if self.attack_kind == "none":
            return None
        plan = AttackPlan(
            kind=self.attack_kind,
            attacker_ids=list(self.attacker_ids),
            attacker_count=self.attacker_count,
            start_time=None if self.attack_start < 0 else self.attack_start,
            hello_interval=self.hello_interval,
        )
        return plan

    def resolved_area(self):
        if self.area_side > 0:
            return self.area_side
        if self.node_count in AREA_BY_SIZE:
            return AREA_BY_SIZE[self.node_count]
        # other sizes keep the 25-node density: area grows linearly with count
        return 100.0 * (self.node_count / 25.0)

    def validate(self):
        errors = []
        positive = ["tx_range", "traffic_period", "slot_seconds", "sim_duration",
                    "sigma_sq", "k", "tx_scale_factor", "ratio_scale_factor",
                    "ratio_scale_floor", "rank_scale_factor", "rank_scale_fallback",
                    "hello_interval", "beacon_min_ms", "beacon_max_ms"]
        for name in positive:
            if getattr(self, name) <= 0:
                errors.append("%s must be > 0 (got %r)" % (name, getattr(self, name)))
        if self.node_count < 2:
            errors.append("node_count must be >= 2 (got %r)" % self.node_count)
        if not 0.0 < self.alpha < 1.0:
            errors.append("alpha must lie in (0,1) (got %r)" % self.alpha)
        if not 0.0 <= self.gamma <= 1.0:
            errors.append("gamma must lie in [0,1] (got %r)" % self.gamma)
        if not 0.0 <= self.alpha_ewma <= 1.0:
            errors.append("alpha_ewma must lie in [0,1] (got %r)" % self.alpha_ewma)
        if self.m < 1:
            errors.append("m must be >= 1 (got %r)" % self.m)
        if self.tau_max <= 1.0:
            errors.append("tau_max must be > 1 (got %r)" % self.tau_max)
        if self.beacon_max_ms < self.beacon_min_ms:
            errors.append("beacon_max_ms must be >= beacon_min_ms")
        if self.attack_kind != "none" and self.attack_kind not in ATTACK_KINDS:
            errors.append("attack_kind must be one of none, %s (got %r)"
                          % (", ".join(ATTACK_KINDS), self.attack_kind))
        if self.log_trust not in ("off", "flags", "full"):
            errors.append("log_trust must be off, flags or full (got %r)" % self.log_trust)
        for name in ("warmup_slots", "refractory_slots", "report_hold_slots",
                     "ticket_ttl_slots", "theta_b", "theta_n"):
            if getattr(self, name) < 0:
                errors.append("%s must be >= 0 (got %r)" % (name, getattr(self, name)))
        if self.theta_b < 1 or self.theta_n < 1:
            errors.append("theta_b and theta_n must be >= 1")
        if errors:
            raise ConfigError("; ".join(errors))
        return self


class ConfigError(ValueError):
    pass


_BOOL_KEYS = {"defense_enabled"}
_INT_KEYS = {"node_count", "seed", "m", "warmup_slots", "refractory_slots",
             "report_hold_slots", "ticket_ttl_slots", "theta_b", "theta_n",
             "admin_delay_slots", "attacker_count"}
_STR_KEYS = {"attack_kind", "log_trust"}
_LIST_KEYS = {"attacker_ids", "admin_script"}


def _parse_value(key, text):
    text = text.strip()
    if key in _BOOL_KEYS:
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError("%s expects a boolean, got %r" % (key, text))
    if key in _INT_KEYS:
        try:
            return int(text)
        except ValueError:
            raise ConfigError("%s expects an integer, got %r" % (key, text)) from None
    if key in _STR_KEYS:
        return text
    if key == "attacker_ids":
        if not text:
            return []
        try:
            return [int(tok) for tok in text.replace(",", " ").split()]
        except ValueError:
            raise ConfigError("attacker_ids expects integers, got %r" % text) from None
    if key == "admin_script":
        return parse_admin_script(text)
    try:
        return float(text)
    except ValueError:
        raise ConfigError("%s expects a number, got %r" % (key, text)) from None


def parse_admin_script(text):
    """Parse ``time:command:arg:arg; time:command`` directive lists."""
    script = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) < 2:
            raise ConfigError("admin_script directive needs time:command, got %r" % chunk)
        try:
            t = float(parts[0])
            args = [int(a) for a in parts[2:]]
        except ValueError:
            raise ConfigError("bad admin_script directive %r" % chunk) from None
        script.append((t, parts[1], *args))
    return script


def known_keys():
    return {f.name for f in fields(ScenarioConfig)}


def apply_overrides(config, overrides):
    """Apply ``key=value`` strings onto a config; unknown keys are errors."""
    valid = known_keys()
    for item in overrides:
        if "=" not in item:
            raise ConfigError("override %r is not of the form key=value" % item)
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in valid:
            raise ConfigError("unknown configuration key %r" % key)
        setattr(config, key, _parse_value(key, value))
    return config


def load_config(path, overrides=()):
    """Read a flat key=value file, apply overrides, validate."""
    config = ScenarioConfig()
    valid = known_keys()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key = value" % (path, lineno))
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in valid:
                raise ConfigError("%s:%d: unknown configuration key %r" % (path, lineno, key))
            setattr(config, key, _parse_value(key, value))
    apply_overrides(config, overrides)
    return config.validate()


def dump_config(config):
    """Render a config back to the flat text form (stable key order)."""
    lines = []
    for f in fields(ScenarioConfig):
        value = getattr(config, f.name)
        if f.name == "attacker_ids":
            value = ",".join(str(v) for v in value)
        elif f.name == "admin_script":
            value = "; ".join(":".join(str(p) for p in d) for d in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append("%s = %s" % (f.name, value))
    return "\n".join(lines) + "\n"
