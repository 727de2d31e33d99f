"""
Report types returned by the services and printed by the command line.
"""
from dataclasses import asdict, dataclass, field

from marshmallow import (
    EXCLUDE, Schema, ValidationError, fields, post_load, validate, validates_schema,
)


@dataclass
class PairReport:
    cnot_forward: bool
    cnot_backward: bool
    cz: bool
    witnesses: list = field(default_factory=list)
    cz_exact: bool = False

    @property
    def all_true(self):
        return self.cnot_forward and self.cz

    def to_dict(self):
        return PairReportSchema().dump(self)

    @classmethod
    def from_dict(cls, data):
        """Rebuild from a printed payload; extra payload keys are ignored."""
        return PairReportSchema(unknown=EXCLUDE).load(data)


@dataclass
class EnumerationReport:
    protocol: str
    weight: int
    policy: str
    mode: str
    counts: dict
    total: int
    coefficient: int
    failure_patterns: list = field(default_factory=list)
    seed: int = 0

    def to_dict(self):
        return EnumerationReportSchema().dump(self)

    @classmethod
    def from_dict(cls, data):
        """Rebuild from a printed payload; extra payload keys are ignored."""
        return EnumerationReportSchema(unknown=EXCLUDE).load(data)


@dataclass
class ResourceReport:
    protocol: str
    ancilla_qubits: int
    data_qubits: int
    total_qubits: int
    two_qubit_gates: int
    single_qubit_gates: int
    breakdown: list
    includes_state_prep: bool
    convention: str
    synthesized_prep: dict = field(default_factory=dict)

    def to_dict(self):
        return ResourceReportSchema().dump(self)

    @classmethod
    def from_dict(cls, data):
        """Rebuild from a printed payload; extra payload keys are ignored."""
        return ResourceReportSchema(unknown=EXCLUDE).load(data)


@dataclass
class SweepReport:
    protocol: str
    injections: int
    outcomes: dict
    failures: list = field(default_factory=list)
    max_residual_weight: int = 0

    def to_dict(self):
        return asdict(self)


@dataclass
class SamplingReport:
    protocol: str
    p: float
    shots: int
    failures: int
    rate: float
    standard_error: float
    distinct_patterns: int

    def to_dict(self):
        return asdict(self)


@dataclass
class CommandRequest:
    subcommand: str
    paths: dict = field(default_factory=dict)
    weight: int = None
    limit: int = None
    seed: int = None
    flags: dict = field(default_factory=dict)


@dataclass
class JsonReport:
    schema_version: int
    subcommand: str
    payload: dict
    provenance: dict = field(default_factory=dict)
    status: str = 'ok'

    def to_dict(self):
        return JsonReportSchema().dump(self)


class PairReportSchema(Schema):
    cnot_forward = fields.Bool(required=True)
    cnot_backward = fields.Bool(required=True)
    cz = fields.Bool(required=True)
    witnesses = fields.List(fields.Dict(), load_default=list)
    cz_exact = fields.Bool(load_default=False)

    @post_load
    def make_report(self, data, **kwargs):
        return PairReport(**data)


class EnumerationReportSchema(Schema):
    protocol = fields.Str(required=True)
    weight = fields.Int(required=True, validate=validate.Range(min=0))
    policy = fields.Str(required=True)
    mode = fields.Str(validate=validate.OneOf(['input', 'circuit']), required=True)
    counts = fields.Dict(keys=fields.Str(), values=fields.Int(), required=True)
    total = fields.Int(required=True)
    coefficient = fields.Int(required=True)
    failure_patterns = fields.List(fields.Raw(), load_default=list)
    seed = fields.Int(load_default=0)

    @validates_schema
    def check_counts(self, data, **kwargs):
        if sum(data['counts'].values()) != data['total']:
            raise ValidationError('counts do not sum to total', 'counts')
        if data['counts'].get('logical_failure', 0) != data['coefficient']:
            raise ValidationError('coefficient differs from the logical failure count',
                                  'coefficient')

    @post_load
    def make_report(self, data, **kwargs):
        return EnumerationReport(**data)


class ResourceReportSchema(Schema):
    protocol = fields.Str(required=True)
    ancilla_qubits = fields.Int(required=True)
    data_qubits = fields.Int(required=True)
    total_qubits = fields.Int(required=True)
    two_qubit_gates = fields.Int(required=True)
    single_qubit_gates = fields.Int(required=True)
    breakdown = fields.List(fields.Dict(), required=True)
    includes_state_prep = fields.Bool(required=True)
    convention = fields.Str(required=True)
    synthesized_prep = fields.Dict(load_default=dict)

    @validates_schema
    def check_totals(self, data, **kwargs):
        gates = sum(entry.get('two_qubit_gates', 0) for entry in data['breakdown'])
        if gates != data['two_qubit_gates']:
            raise ValidationError('breakdown does not sum to the gate total', 'breakdown')

    @post_load
    def make_report(self, data, **kwargs):
        return ResourceReport(**data)


class CommandRequestSchema(Schema):
    subcommand = fields.Str(required=True)
    paths = fields.Dict(keys=fields.Str(), values=fields.Str(allow_none=True), load_default=dict)
    weight = fields.Int(allow_none=True, validate=validate.Range(min=0), load_default=None)
    limit = fields.Int(allow_none=True, validate=validate.Range(min=1), load_default=None)
    seed = fields.Int(allow_none=True, validate=validate.Range(min=0), load_default=None)
    flags = fields.Dict(keys=fields.Str(), load_default=dict)

    @post_load
    def make_request(self, data, **kwargs):
        return CommandRequest(**data)


class JsonReportSchema(Schema):
    schema_version = fields.Int(required=True, validate=validate.Range(min=1))
    subcommand = fields.Str(required=True)
    payload = fields.Dict(required=True)
    provenance = fields.Dict(load_default=dict)
    status = fields.Str(validate=validate.OneOf(['ok', 'false', 'error']), load_default='ok')

    @post_load
    def make_report(self, data, **kwargs):
        return JsonReport(**data)
