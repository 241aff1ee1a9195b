"""Word lists used by the E-Prime and No-Have checkers."""

from __future__ import annotations

BE_FORMS = frozenset({"is", "am", "are", "was", "were", "be", "being", "been"})
# Negated be-forms count as be-forms; "ain't" is included because it stands in for am/is/are not.
BE_NEGATIONS = frozenset({"isn't", "aren't", "wasn't", "weren't", "ain't"})

# Heads on which a trailing 's reads as "is" rather than a possessive.
DEFAULT_S_HEADS = ("it", "that", "there", "who", "here", "what", "she", "he")

HAVE_FORMS = frozenset({"has", "have", "had", "having"})
HAVE_NEGATIONS = frozenset({"hasn't", "haven't", "hadn't"})

DEFAULT_SKIP_WORDS = ("not", "never", "already", "just", "yet", "also")

IRREGULAR_PARTICIPLES = frozenset(
    """
    arisen awoken awaked been borne born beaten become begun bent bet bid bidden bitten bled blown
    broken bred brought broadcast built burnt burned burst bought cast caught chosen clung come cost
    crept cut dealt dug dived done drawn dreamt drunk driven dwelt eaten fallen fed felt fought found
    fled flung flown forbidden forecast foregone foreseen forgotten forgiven forsaken frozen gotten got
    given gone ground grown hung heard hidden hit held hurt kept knelt knit known laid led leapt learnt
    left lent let lain lit lost made meant met mislaid misled mistaken misunderstood mown overcome
    overdone overtaken overthrown overseen overheard overridden paid proven put quit read rid ridden
    rung risen run sawn said seen sought sold sent set sewn shaken shaved shorn shed shone shod shot
    shown shrunk shut sung sunk sat slain slept slid slung slit smelt sown spoken sped spelt spent
    spilt spun spat split spoilt spread sprung stood stolen stuck stung stunk strewn stridden struck
    strung striven sworn swept swollen swum swung taken taught torn told thought thrived thrown thrust
    trodden understood undergone undertaken undone upheld upset woken worn woven wed wept won wound
    withdrawn withheld withstood wrung written rewritten rebuilt redone retold reread rethought
    outgrown outrun outdone outweighed underwritten undersold had
    """.split()
)

# Suffix-heuristic false positives: -ed/-en words that are not participles.
NON_PARTICIPLE_ED_EN = frozenset(
    """
    bed red sled need seed speed feed greed indeed breed deed weed heed steed creed bleed hundred
    sacred naked wicked kindred rugged ragged jagged beloved aged crooked dogged often even open
    seven eleven ten then when men women children oxygen garden kitchen chicken token citizen
    heaven between ashen golden wooden woolen linen omen amen specimen abdomen hydrogen nitrogen
    pollen kitten mitten siren queen green screen teen listen happen sudden burden warden maiden
    raven haven oven
    """.split()
)

# Words that mark the would-reading of 'd ("I'd suggest", "she'd rather"): bare infinitives plus rather/better/sooner.
BASE_VERBS = frozenset(
    """
    be have do go get make take give see say know think come find tell ask use try need want like
    love prefer hate suggest recommend argue agree disagree choose pick select answer guess expect
    imagine assume note add consider check test run start stop keep leave put set let help show
    call look seem feel become begin bring buy pay read write speak hear mean meet move live believe
    hold stand understand lose win change follow learn lead decide allow accept reject conclude
    rather better sooner
    """.split()
)
