"""Frozen Bessel reference values ``(n, x, j_n(x), J_n(x))``.

Generated with ``tests/oracles.py`` (power series summed with mpmath at 150
digits) and rounded to 32 significant digits.
"""

BESSEL_REFERENCES = [
    (0, 0.25, "0.98961583701809171838739481939756", "0.98443592929585270492369114045476"),
    (0, 7.3, "0.11649816720939238969335044280872", "0.28821694763501439903578367202313"),
    (1, 1.0, "0.30116867893975678925156571418732", "0.44005058574493351595968220371891"),
    (1, 33.3, "0.010112503039498643871171196344695", "0.12386214790148009054929984858864"),
    (2, 4.2, "0.25560354790286878253304648153234", "0.3105347009742122948529363110859"),
    (3, 0.01, "0.0000000095237566138768643174540120821526", "0.000000020833203125325521682250522989114"),
    (5, 12.9, "-0.0049103388896230384260611128531782", "0.11415171080112721304878448293414"),
    (7, 99.1, "0.0041435239031588677549279419802811", "0.073930059201751467887314643111262"),
    (10, 3.0, "0.0000035260038931752563332491295282145", "0.00001292835164571588377753453080258"),
    (12, 58.6, "-0.0041992783977845244334635518042391", "-0.084186001004702065774957334633669"),
    (15, 15.7, "0.060724968335112512633086491483706", "0.22438689680934101755120992593875"),
    (18, 81.2, "-0.012455725220754418902402252792255", "-0.066526201566206337819664355520373"),
    (20, 2.5, "6.4488532759578935147624431857783e-18", "3.3090793836587766837280920250865e-17"),
    (22, 40.4, "-0.0076440417072540226159480386199447", "0.028382832733013466311947861469135"),
    (25, 25.9, "0.041905002733833528556474874427879", "0.19272771193328112945962697124599"),
    (28, 70.3, "0.01024453678377154205593824729198", "0.096682705329363517359246015322854"),
    (31, 9.4, "6.5828711803018000417811543086084e-15", "4.1398923445930540351013143083372e-14"),
    (35, 47.2, "0.0013711703646934838402342958731209", "0.057385128645494283908685250949662"),
    (38, 36.6, "0.014460964302169935397993540936926", "0.084889330743516992453806466068852"),
    (40, 100.0, "0.010434108512084284091427452111773", "0.072701754822811056577348966729873"),
]
