"""Fixed set of statement labels attached to every bound and verdict in reports."""

from enum import Enum


class Citation(str, Enum):
    LANGER_GAP = "Eq. Lminmax"
    SUN_PUSHFORWARD = "Ineq. InsDIFrob"
    TL2 = "Theorem Tl2"
    INSTAB_TL = "Theorem InstabTl"
    SEMISTAB_TL = "Prop. SemiStabT^l"
    DIIM_CASE_I = "Theorem Thm:DiIm-"
    TENSOR = "Prop. Tensor"
    INSTAB_DIRIM = "Theorem InstabDirIm"
    FRO_DIRIM = "Prop. FroDirIm"
    BXZX = "Lemma BxZx"
    INST_ZIX = "Prop. InstZiX"
    BXZX0 = "Prop. BxZx0"
    BNX = "Prop. BnX"
    MEHTA_RAMANATHAN = "Mehta-Ramanathan"

    def __str__(self) -> str:
        return self.value
