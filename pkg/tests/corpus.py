"""Hand-built 30-image corpus for group assignment, with expected outcomes
under the baseline/v1/v2/v3 evaluation versions.

Box images use a 100x100 canvas unless noted, so area fractions are
area/10000. Expected outcomes are ("assigned", group) or
("excluded", reason string).
"""

from disparity_audit import AnnotatedImage, BoxAnnotation, GroupTermConfig
from disparity_audit.groups import MinAreaPixels, NoBoxFilter, RelativeArea

VG_TERMS = GroupTermConfig.from_dict({
    "groups": {
        "man": [
            "man.n.01", "male_child.n.01", "guy.n.01", "male.n.01",
            "father.n.01", "son.n.01", "brother.n.01",
        ],
        "woman": [
            "woman.n.01", "girl.n.01", "lady.n.01", "mother.n.01",
            "daughter.n.01", "sister.n.01",
        ],
    },
    "excluded_terms": {
        "man": ["father.n.01", "son.n.01"],
        "woman": ["mother.n.01", "daughter.n.01"],
    },
    "neutral_exclusion_terms": ["person.n.01", "people.n.01"],
})

COCO_TERMS = GroupTermConfig.from_dict({
    "groups": {
        "man": ["man", "mans", "men", "boy", "boys", "father", "fathers",
                "son", "sons", "he", "his", "him"],
        "woman": ["woman", "womans", "women", "girl", "girls", "lady",
                  "ladies", "mother", "mothers", "daughter", "daughters",
                  "she", "her", "hers"],
    },
    "excluded_terms": {
        "man": ["father", "fathers", "son", "sons"],
        "woman": ["mother", "mothers", "daughter", "daughters"],
    },
    "neutral_exclusion_terms": ["person", "persons", "people"],
})

BOX_FILTERS = {
    "baseline": NoBoxFilter(),
    "v1": MinAreaPixels(600),
    "v2": RelativeArea(use_min=0.05, ignore_max=0.02),
    "v3": RelativeArea(use_min=0.05, ignore_max=0.02),
}

VERSIONS = ("baseline", "v1", "v2", "v3")


def box_terms(version: str) -> GroupTermConfig:
    return VG_TERMS if version == "v3" else VG_TERMS.without_exclusions()


def caption_terms(version: str) -> GroupTermConfig:
    return COCO_TERMS if version == "v3" else COCO_TERMS.without_exclusions()


def _img(image_id, boxes=(), captions=(), size=(100, 100)):
    return AnnotatedImage(
        image_id=image_id,
        width=size[0],
        height=size[1],
        boxes=tuple(BoxAnnotation(raw_label=l, x=x, y=y, w=w, h=h) for l, x, y, w, h in boxes),
        captions=tuple(captions),
    )


MAN = ("assigned", "man")
WOMAN = ("assigned", "woman")
MULTI = ("excluded", "MultipleGroups")
NONE_ = ("excluded", "NoGroupEvidence")
SMALL = ("excluded", "BoxTooSmall")
MID = ("excluded", "MidSizeAmbiguous")
NEUTRAL = ("excluded", "NeutralTermPresent")


def _same(outcome):
    return {v: outcome for v in VERSIONS}


# (image, {version: expected outcome}); box evidence first, captions after.
BOX_CASES = [
    (_img("b01", boxes=[("man.n.01", 0, 0, 30, 30)]), _same(MAN)),
    (_img("b02", boxes=[("woman.n.01", 0, 0, 80, 10)]), _same(WOMAN)),
    (_img("b03", boxes=[("man.n.01", 0, 0, 20, 20)]),
     {"baseline": MAN, "v1": SMALL, "v2": MID, "v3": MID}),
    (_img("b04", boxes=[("woman.n.01", 0, 0, 10, 10)]),
     {"baseline": WOMAN, "v1": SMALL, "v2": SMALL, "v3": SMALL}),
    (_img("b05", boxes=[("man.n.01", 0, 0, 30, 30), ("woman.n.01", 0, 40, 80, 10)]),
     _same(MULTI)),
    (_img("b06", boxes=[("man.n.01", 0, 0, 30, 30), ("woman.n.01", 0, 40, 10, 10)]),
     {"baseline": MULTI, "v1": MAN, "v2": MAN, "v3": MAN}),
    (_img("b07", boxes=[("mother.n.01", 0, 0, 10, 100)]),
     {"baseline": WOMAN, "v1": WOMAN, "v2": WOMAN, "v3": NONE_}),
    (_img("b08", boxes=[("mother.n.01", 0, 0, 10, 100), ("man.n.01", 20, 0, 30, 30)]),
     {"baseline": MULTI, "v1": MULTI, "v2": MULTI, "v3": MAN}),
    (_img("b09", boxes=[("dog.n.01", 0, 0, 40, 50)]), _same(NONE_)),
    (_img("b10", boxes=[("man.n.01", 0, 0, 30, 20)]), _same(MAN)),
    (_img("b11", boxes=[("man.n.01", 0, 0, 25, 20)]),
     {"baseline": MAN, "v1": SMALL, "v2": MAN, "v3": MAN}),
    (_img("b12", boxes=[("woman.n.01", 0, 0, 20, 10)]),
     {"baseline": WOMAN, "v1": SMALL, "v2": MID, "v3": MID}),
    (_img("b13", boxes=[("man.n.01", 0, 0, 40, 20), ("man.n.01", 0, 30, 30, 10)]),
     {"baseline": MAN, "v1": MAN, "v2": MID, "v3": MID}),
    (_img("b14", boxes=[("man.n.01", 0, 0, 40, 20), ("woman.n.01", 0, 30, 30, 10)]),
     {"baseline": MULTI, "v1": MAN, "v2": MID, "v3": MID}),
    (_img("b15", boxes=[("woman.n.01", 0, 0, 30, 20), ("mother.n.01", 40, 0, 10, 100)]),
     _same(WOMAN)),
    (_img("b16", boxes=[("father.n.01", 0, 0, 35, 20), ("woman.n.01", 0, 30, 30, 20)]),
     {"baseline": MULTI, "v1": MULTI, "v2": MULTI, "v3": WOMAN}),
    (_img("b17", boxes=[("man.n.01", 0, 0, 30, 20)], size=(200, 100)),
     {"baseline": MAN, "v1": MAN, "v2": MID, "v3": MID}),
    (_img("b18", boxes=[("woman.n.01", 0, 0, 40, 30), ("woman.n.01", 50, 0, 35, 20)], size=(200, 100)),
     {"baseline": WOMAN, "v1": WOMAN, "v2": MID, "v3": MID}),
    (_img("b19", captions=["a scenic view"]), _same(NONE_)),
    (_img("b20", boxes=[("man.n.01", 0, 0, 20, 20), ("woman.n.01", 0, 30, 20, 20)]),
     {"baseline": MULTI, "v1": SMALL, "v2": MID, "v3": MID}),
]

CAPTION_CASES = [
    (_img("c01", captions=["a man riding his bike"]), _same(MAN)),
    (_img("c02", captions=["a woman and a boy at the park"]), _same(MULTI)),
    (_img("c03", captions=["two people at a market"]), _same(NEUTRAL)),
    (_img("c04", captions=["a person walking with her dog"]), _same(NEUTRAL)),
    (_img("c05", captions=["the mother with a stroller"]),
     {"baseline": WOMAN, "v1": WOMAN, "v2": WOMAN, "v3": NONE_}),
    (_img("c06", captions=["a scenic mountain view"]), _same(NONE_)),
    (_img("c07", captions=["his daughter laughs"]),
     {"baseline": MULTI, "v1": MULTI, "v2": MULTI, "v3": MAN}),
    (_img("c08", captions=["the father and his son fish"]), _same(MAN)),
    (_img("c09", captions=["mothers and daughters at the fair"]),
     {"baseline": WOMAN, "v1": WOMAN, "v2": WOMAN, "v3": NONE_}),
    (_img("c10", captions=["a womanly silhouette"]), _same(NONE_)),
]

assert len(BOX_CASES) + len(CAPTION_CASES) == 30
