"""
Marshmallow schemas for data files and JSON documents.
"""

from marshmallow import INCLUDE, Schema, fields, validate

SCHEMA_VERSION = "1.0"


class PostelSchema(Schema):
    """
    Be liberal in what you accept, and conservative in what you send.

    A schema that allows unknown fields, so that annotated data files and
    documents from newer versions still load.
    """

    class Meta:
        """
        Allow unknown fields.
        """

        unknown = INCLUDE


class DocumentSchema(PostelSchema):
    """
    Header shared by every emitted document.
    """

    schema_version = fields.String(required=True, validate=validate.Equal(SCHEMA_VERSION))
    kind = fields.String(required=True)


class WeightRelationsSchema(PostelSchema):
    """
    Schema for the relations of a single weight.
    """

    weight = fields.Integer(required=True)
    basis = fields.List(fields.String(), required=True)
    relations = fields.Dict(
        keys=fields.String(),
        values=fields.List(fields.List(fields.Raw())),
        load_default=dict,
    )


class RelationTableSchema(PostelSchema):
    """
    Schema for an MZV relation table file.
    """

    description = fields.String()
    weights = fields.List(fields.Nested(WeightRelationsSchema), required=True)


class ChordSchema(PostelSchema):
    """
    Schema for a chord.
    """

    i = fields.Integer(required=True)
    j = fields.Integer(required=True)


class ChordMonomialSchema(PostelSchema):
    """
    Schema for a signed chord monomial.
    """

    n = fields.Integer(required=True)
    chords = fields.List(fields.Nested(ChordSchema), required=True)
    sign = fields.Integer(validate=validate.OneOf([-1, 1]))


class DiagramListingSchema(DocumentSchema):
    """
    Schema for the output of ``enumerate``.
    """

    n = fields.Integer(required=True)
    k = fields.Integer(required=True)
    diagram_class = fields.String(data_key="class", required=True)
    count = fields.Integer(required=True)
    diagrams = fields.List(fields.Nested(ChordMonomialSchema), required=True)


class MZVExprSchema(PostelSchema):
    """
    Schema for an MZV coefficient, in text and numeric form.
    """

    text = fields.String(required=True)
    value = fields.Float(allow_none=True)


class NuTermSchema(PostelSchema):
    """
    Schema for one printed term of an exotic operation.
    """

    word = fields.String(required=True)
    coefficient = fields.Nested(MZVExprSchema, required=True)


class NuDocumentSchema(DocumentSchema):
    """
    Schema for an exotic operation in the BV basis.
    """

    n = fields.Integer(required=True)
    degree = fields.Integer(required=True)
    period_mode = fields.String(required=True)
    terms = fields.List(fields.Nested(NuTermSchema), required=True)


class PeriodDocumentSchema(DocumentSchema):
    """
    Schema for a numeric period.
    """

    n = fields.Integer(required=True)
    prime_index = fields.Integer(required=True)
    bracketing = fields.String(allow_none=True)
    method = fields.String(required=True)
    value = fields.Float(required=True)
    error = fields.Float(required=True, validate=validate.Range(min=0))
    samples_or_depth = fields.Integer()
    fitted = fields.String(allow_none=True)


class CheckSchema(PostelSchema):
    """
    Schema for the outcome of a single check.
    """

    name = fields.String(required=True)
    passed = fields.Boolean(required=True)
    residual = fields.Float(allow_none=True)
    detail = fields.String(allow_none=True)
    witness = fields.Raw(allow_none=True)


class ReportSchema(DocumentSchema):
    """
    Schema for a verification report.
    """

    suite = fields.String(required=True)
    passed = fields.Boolean(required=True)
    checks = fields.List(fields.Nested(CheckSchema), required=True)
    caveats = fields.List(fields.String())
