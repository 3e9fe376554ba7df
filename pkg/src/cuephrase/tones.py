"""Well-formedness of tone sequences for one intonational phrase.

An intermediate phrase is one or more pitch accents followed by a phrase
accent; an intonational phrase is one or more intermediate phrases
followed by a boundary tone.
"""

from typing import NamedTuple, Optional, Sequence

PITCH_ACCENTS = ("H*", "L*", "L*+H", "L+H*", "H*+L", "H+L*")
PHRASE_ACCENTS = ("H-", "L-")
BOUNDARY_TONES = ("H%", "L%")
TONES = PITCH_ACCENTS + PHRASE_ACCENTS + BOUNDARY_TONES

_KIND = {t: "pa" for t in PITCH_ACCENTS}
_KIND.update({t: "phrase" for t in PHRASE_ACCENTS})
_KIND.update({t: "boundary" for t in BOUNDARY_TONES})

# state -> {symbol kind -> next state}; "done" is the only accepting state.
_TRANSITIONS = {
    "start": {"pa": "accents"},
    "accents": {"pa": "accents", "phrase": "intermediate"},
    "intermediate": {"pa": "accents", "boundary": "done"},
    "done": {},
}


class ToneVerdict(NamedTuple):
    accepted: bool
    position: Optional[int] = None  # first offending index; len(tokens) means end of input

    def __bool__(self):
        return self.accepted


def validate_tone_sequence(tokens: Sequence[str]) -> ToneVerdict:
    """Check ``tokens`` against ``(PitchAccent+ PhraseAccent)+ BoundaryTone``.

    >>> validate_tone_sequence(["H*", "L-", "L%"])
    ToneVerdict(accepted=True, position=None)
    >>> validate_tone_sequence(["H*", "H%"])
    ToneVerdict(accepted=False, position=1)
    """
    state = "start"
    for i, tok in enumerate(tokens):
        try:
            kind = _KIND[tok]
        except KeyError:
            raise ValueError(f"{tok!r} is not a tone symbol") from None
        state = _TRANSITIONS[state].get(kind)
        if state is None:
            return ToneVerdict(False, i)
    if state == "done":
        return ToneVerdict(True)
    return ToneVerdict(False, len(tokens))
