from evosquare import evo
from evosquare.fields import FieldSpec


def alg(field, lam, a, label=None):
    if isinstance(field, str):
        field = FieldSpec.parse(field)
    return evo.from_presentation(field, [str(x) for x in lam], [str(x) for x in a], label)
