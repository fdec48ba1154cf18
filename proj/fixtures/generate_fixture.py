#!/usr/bin/env python3
"""Deterministic generator for the bundled uket260 fixture.

Phase "corpus" writes a 300-case synthetic corpus (manifest + transcripts).
Phase "annotate" reads the sample manifest produced by `uket sample` and writes
model responses into the replay cache, annotations, and scenario-specific
transcripts for every sampled case.

    python3 fixtures/generate_fixture.py corpus   fixtures/uket260
    uket sample --corpus-dir fixtures/uket260/corpus --seed 20240617 --out fixtures/uket260/sample.json
    python3 fixtures/generate_fixture.py annotate fixtures/uket260
    uket extract --mode replay-strict ... --records fixtures/uket260/records
"""

import hashlib
import json
import random
import re
import sys
from pathlib import Path

TEMPLATE_ID = "uket-final"
TEMPLATE_VERSION = "v1"
MODEL_ID = "gpt-4-32k"
CHARS_PER_PAGE = 3000

# Per-bucket corpus sizes: the sample plan plus 40 surplus cases spread over
# buckets that hold none of the hand-written cases.
PLAN = {**{1: 163, 2: 43, 3: 9, 4: 6, 5: 4, 6: 3}, **{p: 2 for p in range(7, 14)},
        **{p: 1 for p in range(14, 21)}, 21: 11}
SURPLUS = {2: 15, 5: 5, 10: 5, 21: 15}

GOLDEN_1 = "3328920/2017"
GOLDEN_2 = "2301070/2018"
REVIEWED_1 = "3305262/2021"
REVIEWED_2 = "2602938/2022"
REVIEWED_3 = "4107496/2014"
REVIEWED_4 = "1302495/2017"
NAMED_PARTIES = {
    GOLDEN_1: ("Mr Y Mfunda", ["Swaay Child and Adolescent Services Limited"], "Watford"),
    GOLDEN_2: ("Mr A Martin", ["Southwark Council", "The Governing Body of Evangelina Hospital School"],
               "London South"),
    REVIEWED_1: ("Ms T Harrison", ["Network Rail Infrastructure Limited"], "Reading"),
    REVIEWED_2: ("Mr G Steadman", ["Riatex Limited"], "Midlands East"),
    REVIEWED_3: ("Mr W Mollan", ["Arrow XI Limited"], "Glasgow"),
    REVIEWED_4: ("Miss M Gugiu", ["Vv S Diner Limited"], "Birmingham"),
}
FIXED_PAGES = {GOLDEN_1: 1, GOLDEN_2: 3, REVIEWED_1: 1, REVIEWED_2: 1, REVIEWED_3: 1, REVIEWED_4: 1}

ASPECTS = ["facts", "claims", "statute_refs", "precedent_refs", "general_outcome",
           "outcome_label", "order_remedies", "reasons"]

FIRST = ["A", "B", "C", "D", "E", "F", "G", "H", "J", "K", "L", "M", "N", "P", "R", "S", "T", "W"]
SURNAMES = ["Adeyemi", "Barnes", "Choudhury", "Davies", "Ellison", "Fraser", "Gallagher", "Hussain",
            "Ivanova", "Jenkins", "Kowalski", "Lloyd", "Mensah", "Nowak", "Okafor", "Patel", "Quinn",
            "Rahman", "Sutherland", "Thompson", "Underwood", "Vaughan", "Whitfield", "Yilmaz", "Zielinski",
            "Brennan", "Carter", "Doherty", "Evans", "Fletcher", "Greene", "Harding", "Iqbal", "Kerr",
            "Lambert", "Morrison", "Nichols", "O'Neill", "Parry", "Reid", "Shah", "Turner", "Walsh"]
TITLES = ["Mr", "Mrs", "Ms", "Miss"]
COMPANY_A = ["Northgate", "Riverside", "Ashford", "Kingsway", "Meridian", "Harbour", "Oakfield",
             "Sterling", "Crown", "Beacon", "Highland", "Lakeside", "Pennine", "Thames", "Severn",
             "Albion", "Caledonia", "Redbrook", "Westfield", "Eastgate"]
COMPANY_B = ["Logistics", "Care Homes", "Security Services", "Catering", "Retail", "Construction",
             "Cleaning Services", "Recruitment", "Hospitality", "Engineering", "Transport", "Dental Care",
             "Facilities Management", "Print Services", "Motors"]
VENUES = ["London Central", "London South", "London East", "Watford", "Reading", "Bristol", "Cardiff",
          "Birmingham", "Nottingham", "Leeds", "Manchester", "Liverpool", "Newcastle", "Exeter",
          "Southampton", "Cambridge", "Glasgow", "Edinburgh", "Aberdeen", "Croydon"]
JOBS = ["care assistant", "warehouse operative", "delivery driver", "chef", "security officer",
        "sales assistant", "administrator", "cleaner", "site labourer", "receptionist", "dental nurse",
        "project manager", "bookkeeper", "machine operator", "support worker"]
PRECEDENTS = ["British Home Stores Ltd v Burchell [1980] ICR 303",
              "Iceland Frozen Foods Ltd v Jones [1983] ICR 17",
              "Polkey v A E Dayton Services Ltd [1988] ICR 142",
              "Igen Ltd v Wong [2005] ICR 931",
              "Western Excavating (ECC) Ltd v Sharp [1978] ICR 221",
              "Madarassy v Nomura International plc [2007] ICR 867",
              "Sainsbury's Supermarkets Ltd v Hitt [2003] ICR 111",
              "Malik v BCCI [1997] ICR 606",
              "Royal Mail Group Ltd v Efobi [2021] UKSC 33",
              "Palmer v Southend-on-Sea Borough Council [1984] ICR 372"]
NO_PRECEDENTS = [
    "There are no references to precedents or other court decisions in the provided text.",
    "The decision does not provide any references to precedents or other court decisions.",
    "There are no specific references to precedents or other court decisions in the judgment.",
]

# ---------------------------------------------------------------------------
# Hand-written responses for the six cases reproduced verbatim.

GOLDEN_1_RESPONSE = (
    "- Facts of the case:** The case involves Mr Y Mfunda (Claimant) and Swaay Child and Adolescent "
    "Services Limited (Respondent). The Respondent failed to present a response to the claim. The "
    "Claimant was owed wages and claimed for unauthorised deduction from wages and breach of contract "
    "related to mileage expenses.\n"
    "- Claims made in the specific court decision:** The Claimant claimed for unauthorised deduction "
    "from wages and breach of contract related to mileage expenses.\n"
    "- References to legal statutes, acts, regulations, provisions and rules:** The case refers to "
    "Rule 21 of Schedule 1 to the Employment Tribunals (Constitution and Rules of Procedure) "
    "Regulations 2013.\n"
    "- References to precedents and other court decisions:** There are no references to precedents "
    "or other court decisions in the provided text.\n"
    "- General case outcome:** The Respondent was ordered to pay the Claimant £6,690.75 (gross) in "
    "compensation for the unauthorised deduction from wages. The claim for breach of contract related "
    "to mileage expenses was dismissed as the Claimant is still employed and does not have the right "
    "to bring a claim for breach of contract.\n"
    "- General case outcome summarised:** Claimant partly wins.\n"
    "- Detailed order and remedies:** The Respondent is ordered to pay the Claimant £6,690.75 "
    "(gross) in compensation for the unauthorised deduction from wages. The hearing listed for 14 May "
    "2018 is cancelled.\n"
    "- Essential reasons for the decision:** The Respondent failed to present a response to the "
    "claim. The Claimant was found to be owed wages, hence the award for unauthorised deduction from "
    "wages. The claim for breach of contract was dismissed as the Claimant is still employed and does "
    "not have the right to bring a claim for breach of contract."
)

GOLDEN_2_RESPONSE = (
    "1. Facts of the case: The claimant, Mr A Martin, is a teacher employed by Southwark Council and "
    "the Governing Body of Evangelina Hospital School. He alleges that he was required to work more "
    "than the statutory limit of 1265 directed hours per academic year without additional pay, "
    "amounting to unauthorised deductions from his wages. He also alleges that he made protected "
    "disclosures about this issue, which led to detrimental treatment.\n\n"
    "2. Claims made in the case: The claimant made two main claims. Firstly, he claimed for "
    "unauthorised deductions from wages due to being required to work beyond the statutory limit of "
    "directed hours without additional pay. Secondly, he claimed that he suffered detrimental "
    "treatment as a result of making protected disclosures about this issue.\n\n"
    "3. References to legal statutes, acts, regulations, provisions and rules: The case refers to the "
    "Employment Rights Act 1996, specifically section 13 relating to unauthorised deductions from "
    "wages. It also refers to the School Teachers' Pay and Conditions Act 1991 and the Employment "
    "Tribunals (Constitution and Rules of Procedure) Regulations 2013, particularly rules 2, 37 and "
    "39.\n\n"
    "4. References to precedents and other court decisions: The case of *Agarwal v Cardiff "
    "University* is mentioned, which confirmed that a Tribunal may determine the construction of a "
    "contract of employment in an unauthorised deduction from wages claim. The case of *Chesterton "
    "Global v Nurmohamed* is also referred to in relation to whether the disclosures made were in the "
    "public interest.\n\n"
    "5. General case outcome: The Tribunal struck out the claimant's claim for unauthorised deductions "
    "from wages, finding that it had no reasonable prospect of success. The claimant's protected "
    "disclosure claim was partly struck out, with one alleged disclosure having no reasonable prospect "
    "of success. The Tribunal refused the respondents' applications for a strike out or deposit order "
    "on other grounds. The claimant's application to add two additional respondents was also "
    "refused.\n\n"
    "6. General case outcome summarised using one of the following four labels: 'Claimant partly "
    "wins'.\n\n"
    "7. Detailed order and remedies: The Tribunal did not order any remedies as it struck out the "
    "claimant's claim for unauthorised deductions from wages and partly struck out his protected "
    "disclosure claim. The Tribunal also refused the respondents' applications for a strike out or "
    "deposit order on other grounds and the claimant's application to add two additional "
    "respondents.\n\n"
    "8. Essential reasons for the decision: The Tribunal found that the claimant had no legal "
    "entitlement to pay for directed hours worked over the statutory limit of 1265 per year, and "
    "therefore his claim for unauthorised deductions from wages had no reasonable prospect of success. "
    "The Tribunal also found that one of the claimant's alleged protected disclosures had no "
    "reasonable prospect of success as it was a disclosure to a third party that no one from the "
    "respondents saw. The Tribunal refused the respondents' applications for a strike out or deposit\n\n"
    "order on other grounds and the claimant's application to add two additional respondents, finding "
    "that the balance of prejudice tipped in favour of the respondents."
)


def numbered(sections, style="numbered"):
    """sections: list of (heading, body) in aspect order."""
    out = []
    for i, (heading, body) in enumerate(sections, start=1):
        if style == "numbered":
            out.append(f"{i}. {heading}: {body}")
        elif style == "bold":
            out.append(f"{i}. **{heading}:** {body}")
        else:
            out.append(f"- {heading}:** {body}")
    sep = "\n" if style == "bullet" else "\n\n"
    return sep.join(out)


HEADINGS = [
    ["Facts of the case"],
    ["Claims made in the specific court decision", "Claims made", "Claims made in the case"],
    ["References to legal statutes, acts, regulations, provisions and rules"],
    ["References to precedents and other court decisions"],
    ["General case outcome"],
    ["General case outcome summarised using one of the following four labels",
     "General case outcome summarised"],
    ["Detailed order and remedies"],
    ["Essential reasons for the decision"],
]


def reviewed_responses():
    b1 = [
        "The case involves Ms Tanika Harrison (claimant) and Network Rail Infrastructure Limited "
        "(respondent). The case was heard remotely via telephone due to COVID-19 restrictions.",
        "The claimant, Ms Tanika Harrison, had made a claim for unlawful deduction of pay. However, "
        "this claim was dismissed upon withdrawal.",
        "The decision refers to rule 52 of the Employment Tribunals Rules of Procedure 2013.",
        NO_PRECEDENTS[0],
        "The claim was dismissed following its withdrawal by the claimant.",
        "Other.",
        "The claim is dismissed upon withdrawal. No further order is made.",
        "The claimant withdrew her claim and the Tribunal was satisfied that it was appropriate to "
        "dismiss it so that it could not be brought again.",
    ]
    b2 = [
        "The claimant, Mr G Steadman, issued a claim in the Midlands East Employment Tribunals on 10 "
        "December 2022 against the respondent, Riatex Limited. The respondent failed to present a "
        "valid response on time.",
        "The claimant alleged that the respondent made unauthorised deductions from his wages.",
        "Rule 21 of the Employment Tribunals Rules of Procedure 2013; section 13 of the Employment "
        "Rights Act 1996.",
        NO_PRECEDENTS[0],
        "The claim for unauthorised deductions from wages succeeded and the respondent was ordered to "
        "pay the claimant the sum deducted.",
        "Claimant wins.",
        "The respondent is ordered to pay the claimant £1,842.00 in respect of unauthorised "
        "deductions from wages.",
        "The decision was made in accordance with Rule 21 of the Employment Tribunals Rules of "
        "Procedure 2013 due to the respondent's failure to present a valid response on time. The "
        "respondent was found to have made unauthorised deductions from the claimant's wages.",
    ]
    b3 = [
        "The claimant, Mr W Mollan, brought proceedings against Arrow XI Limited. The claimant "
        "notified the Tribunal that the proceedings were withdrawn.",
        "The claimant, Mr W Mollan, had made a claim against the respondents, Arrow XI Limited, but "
        "later withdrew it.",
        "Rule 52 of the Employment Tribunals Rules of Procedure 2013.",
        NO_PRECEDENTS[1],
        "The proceedings were dismissed following withdrawal by the claimant.",
        "Claimant loses.",
        "The proceedings are dismissed.",
        "The claimant withdrew the proceedings and did not wish to reserve the right to bring a "
        "further claim, so dismissal was appropriate.",
    ]
    b4 = [
        "Miss M Gugiu, the claimant, was an employee of Vv S Diner Limited, the respondent. The "
        "respondent did not attend the hearing. The claimant alleged that she suffered an unlawful "
        "deduction from wages, was not paid holiday pay, did not receive notice pay, and did not "
        "receive a statement of terms and conditions.",
        "The claimant made four claims against the respondent:\n\n"
        "- Unlawful deduction from wages (£1627.50)\n"
        "- Unpaid holiday pay (£196.35)\n"
        "- Unpaid notice pay (£300.00)\n"
        "- Not receiving a statement of terms and conditions (£600.00)",
        "Sections 13, 38 and 86 of the Employment Rights Act 1996; regulation 14 of the Working Time "
        "Regulations 1998; section 38 of the Employment Act 2002.",
        NO_PRECEDENTS[0],
        "The court ruled in favor of the claimant, Miss M Gugiu. The respondent, Vv S Diner Limited, "
        "was ordered to pay a total of £2723.85 to the claimant.",
        "“Claimant wins”.",
        "The respondent shall pay the claimant £1627.50 for unlawful deductions, £196.35 in "
        "holiday pay, £300.00 in notice pay and £600.00 for the failure to provide a "
        "statement of terms, a total of £2723.85.",
        "The decision does not provide the reasons for the judgment.",
    ]
    headings = ["Facts of the case", "Claims made in the specific court decision",
                "References to legal statutes, acts, regulations, provisions and rules",
                "References to precedents and other court decisions", "General case outcome",
                "General case outcome summarised using one of the following four labels",
                "Detailed order and remedies", "Essential reasons for the decision"]
    b2_headings = list(headings)
    b2_headings[1] = "Claims made"
    return {
        REVIEWED_1: numbered(list(zip(headings, b1))),
        REVIEWED_2: numbered(list(zip(b2_headings, b2))),
        REVIEWED_3: numbered(list(zip(headings, b3))),
        REVIEWED_4: numbered(list(zip(headings, b4))),
    }


# ---------------------------------------------------------------------------
# Synthetic parties and transcripts.

class Parties:
    def __init__(self, rng):
        self.title = rng.choice(TITLES)
        self.initial = rng.choice(FIRST)
        self.surname = rng.choice(SURNAMES)
        self.respondent = f"{rng.choice(COMPANY_A)} {rng.choice(COMPANY_B)} Limited"
        self.venue = rng.choice(VENUES)
        self.judge = f"Employment Judge {rng.choice(SURNAMES)}"
        self.job = rng.choice(JOBS)
        self.he = "he" if self.title == "Mr" else "she"
        self.his = "his" if self.title == "Mr" else "her"

    @property
    def claimant(self):
        return f"{self.title} {self.initial} {self.surname}"


def body_text(case_id, parties, pages, paragraphs, rng):
    """A transcript of exactly the length class implied by `pages`."""
    low = (pages - 1) * CHARS_PER_PAGE + 1
    high = pages * CHARS_PER_PAGE
    target = rng.randint(max(low, 900), high) if pages == 1 else rng.randint(low + 200, high - 200)
    head = (
        "EMPLOYMENT TRIBUNALS\n\n"
        f"Claimant: {parties.claimant}\n"
        f"Respondent: {parties.respondent}\n"
        f"Heard at: {parties.venue}\n"
        f"Before: {parties.judge}\n"
        f"Case number: {case_id}\n\n"
        "JUDGMENT\n\n"
    )
    filler = [
        "The Tribunal had regard to the documents in the bundle and to the oral evidence it heard.",
        "Where there was a dispute of fact the Tribunal decided it on the balance of probabilities.",
        "The parties were given the opportunity to make submissions at the end of the hearing.",
        f"The {parties.respondent} rota and payslips were included in the agreed bundle.",
        "The Tribunal reminded itself of the burden and standard of proof in such claims.",
        "Neither party applied for written reasons at the conclusion of the hearing.",
        f"The claimant gave evidence on {parties.his} own behalf and was cross-examined.",
    ]
    text = head
    n = 1
    for p in paragraphs:
        text += f"{n}. {p}\n\n"
        n += 1
    while len(text) < target:
        text += f"{n}. {rng.choice(filler)} {rng.choice(filler)}\n\n"
        n += 1
    text = text.rstrip() + "\n"
    if len(text) > target:
        text = text[: target - 1].rstrip() + "\n"
    while len(text) <= low - 1:
        text = text[:-1] + " " * (low - len(text)) + "\n"
    assert (len(text) + CHARS_PER_PAGE - 1) // CHARS_PER_PAGE == pages, (case_id, len(text), pages)
    return text


def make_case_id(rng, used):
    while True:
        cid = f"{rng.choice('1234568')}{rng.randint(100000, 999999)}/{rng.randint(2014, 2023)}"
        if cid not in used:
            used.add(cid)
            return cid


def build_corpus_ids(rng):
    used = set(FIXED_PAGES)
    cases = []
    for pages, count in sorted(PLAN.items()):
        total = count + SURPLUS.get(pages, 0)
        fixed = [cid for cid, p in FIXED_PAGES.items() if p == pages]
        for cid in fixed:
            cases.append((cid, pages))
        for _ in range(total - len(fixed)):
            page_count = pages if pages <= 20 else rng.randint(21, 60)
            cases.append((make_case_id(rng, used), page_count))
    return cases


def phase_corpus(root):
    rng = random.Random(20240617)
    corpus_dir = root / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for cid, pages in build_corpus_ids(rng):
        parties = Parties(rng)
        if cid in NAMED_PARTIES:
            name, respondents, venue = NAMED_PARTIES[cid]
            parties.title, rest = name.split(" ", 1)
            parties.initial, parties.surname = rest.split(" ", 1)
            parties.respondent = " and ".join(respondents)
            parties.venue = venue
        manifest[cid] = {
            "page_count": pages,
            "decision_date": f"{cid[-4:]}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
            "hearing_venue": parties.venue,
            "jurisdiction_codes": [],
            "judges": [parties.judge],
            "claimants": [parties.claimant],
            "respondents": NAMED_PARTIES[cid][1] if cid in NAMED_PARTIES else [parties.respondent],
        }
        text = body_text(cid, parties, pages, [], rng)
        (corpus_dir / (cid.replace("/", "_") + ".txt")).write_text(text, encoding="utf-8")
    (corpus_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"corpus: {len(manifest)} cases")


# ---------------------------------------------------------------------------
# Scenarios. Each returns (eight section bodies, transcript paragraphs).

def money(rng, lo=300, hi=9000):
    return f"£{rng.randint(lo, hi):,}.{rng.choice(['00', '50', '25', '75', '40'])}"


def sc_rule21(p, rng, where):
    """Default judgment after no response. where: 'fsr', 's', 'sr'."""
    amount = money(rng)
    r21 = rng.choice([
        "Rule 21 of the Employment Tribunals Rules of Procedure 2013",
        "rule 21 of Schedule 1 to the Employment Tribunals (Constitution and Rules of Procedure) "
        "Regulations 2013",
        "Rule 21 of the Employment Tribunal Rules 2013",
    ])
    claim = rng.choice(["unauthorised deductions from wages", "unpaid holiday pay", "notice pay"])
    facts = (f"{p.claimant} worked for {p.respondent} as a {p.job}. The claimant brought a claim for "
             f"{claim}.")
    if where == "fsr":
        facts += (f" No response was received from the respondent and the matter was considered under "
                  f"Rule 21.")
    else:
        facts += " The respondent did not take part in the proceedings."
    claims = f"The claimant claimed {claim} from the respondent."
    statutes = f"{r21}; Employment Rights Act 1996."
    outcome = f"Judgment was entered for the claimant and {p.respondent} must pay {amount}."
    orders = f"The respondent shall pay the claimant the sum of {amount} without deduction."
    if where in ("fsr", "sr"):
        reasons = (f"Because no response had been presented, the Tribunal issued judgment under rule 21 "
                   f"on the material available. The sum claimed was supported by the claimant's "
                   f"schedule of loss.")
    else:
        reasons = ("The respondent had not presented a response within the time allowed. The claimant's "
                   "evidence established the amount owed.")
    label = rng.choice(["Claimant wins.", "Claimant wins", "'Claimant wins'."])
    paras = [f"The claim was presented for {claim}. No response has been presented.",
             f"Judgment is issued under {r21}.", f"The respondent is to pay {amount}."]
    return [facts, claims, statutes, rng.choice(NO_PRECEDENTS), outcome, label, orders, reasons], paras


def sc_withdrawal(p, rng, label_other):
    facts = rng.choice([
        f"{p.claimant} brought claims against {p.respondent} arising from {p.his} employment as a "
        f"{p.job}. The claimant later informed the Tribunal that the claim was withdrawn.",
        f"The claimant, {p.claimant}, was employed by {p.respondent}. By email the claimant withdrew "
        f"the proceedings before the final hearing.",
    ])
    claims = rng.choice([
        f"The claimant had brought a complaint of unfair dismissal, which {p.he} subsequently withdrew.",
        "The claimant had claimed unpaid wages and holiday pay; those claims were withdrawn.",
    ])
    statutes = "Rule 52 of the Employment Tribunals Rules of Procedure 2013."
    outcome = "The claim was dismissed on withdrawal."
    label = rng.choice(["Other.", "Other", "'Other'."]) if label_other else rng.choice(
        ["Claimant loses.", "Claimant loses", "“Claimant loses”."])
    orders = "The proceedings are dismissed and the listed hearing is vacated."
    reasons = ("As the claimant withdrew the claim and did not wish to reserve the right to bring it "
               "again, the Tribunal dismissed it.")
    paras = ["The claimant has withdrawn the claim.", "The claim is dismissed under rule 52."]
    return [facts, claims, statutes, rng.choice(NO_PRECEDENTS), outcome, label, orders, reasons], paras


def sc_procedural_strike_out(p, rng):
    ground = rng.choice([
        ("the claimant failed to pay the deposit ordered", "rule 39", "Claimant loses."),
        ("the claimant did not comply with the unless order", "rule 38", "Claimant loses."),
        ("the claim was not actively pursued", "rule 37(1)(d)", "Claimant loses."),
        ("the claimant did not attend the hearing", "rule 47", "Claimant loses."),
    ])
    facts = (f"{p.claimant} was employed by {p.respondent} as a {p.job}. The claimant brought a "
             f"complaint relating to {p.his} dismissal.")
    claims = "The claimant complained of unfair dismissal and unpaid notice pay."
    statutes = f"The decision refers to {ground[1]} of the Employment Tribunals Rules of Procedure 2013."
    outcome = f"The claim was struck out because {ground[0]}."
    orders = "The claims are struck out in their entirety."
    reasons = (f"The Tribunal was satisfied that {ground[0]} and that striking out was a proportionate "
               f"response in the circumstances.")
    paras = [f"The Tribunal considered {ground[1]}.", f"It found that {ground[0]}."]
    return [facts, claims, statutes, rng.choice(NO_PRECEDENTS), outcome, ground[2], orders, reasons], paras


def sc_preliminary(p, rng):
    issue = rng.choice([
        ("whether the claimant was an employee", "section 230 of the Employment Rights Act 1996"),
        ("whether the claimant was disabled at the relevant time", "section 6 of the Equality Act 2010"),
        ("the case management of the claim", "rules 29 and 30 of the Employment Tribunals Rules of "
                                              "Procedure 2013"),
        ("whether the claimant's reconsideration application should proceed",
         "rules 70 to 72 of the Employment Tribunals Rules of Procedure 2013"),
    ])
    facts = (f"{p.claimant} worked for {p.respondent} as a {p.job}. A preliminary hearing was listed "
             f"to consider {issue[0]}.")
    claims = "The claimant's complaints of unfair dismissal and discrimination remain to be heard."
    statutes = f"The decision refers to {issue[1]}."
    outcome = f"The Tribunal made a preliminary determination on {issue[0]} and listed a further hearing."
    label = rng.choice(["Other.", "Other"])
    orders = "The parties must exchange documents within 28 days and the case is listed for a final hearing."
    reasons = f"The Tribunal heard brief submissions and considered the relevant test under {issue[1]}."
    paras = [f"This preliminary hearing addressed {issue[0]}.", "Orders were made for the final hearing."]
    return [facts, claims, statutes, rng.choice(NO_PRECEDENTS), outcome, label, orders, reasons], paras


def sc_time_limit(p, rng):
    facts = (f"{p.claimant} was dismissed by {p.respondent} from {p.his} post as a {p.job}. The "
             f"claim form was presented after the primary time limit had expired.")
    claims = "The claimant complained of unfair dismissal."
    statutes = "Section 111(2) of the Employment Rights Act 1996."
    outcome = "The Tribunal had no jurisdiction to hear the complaint, which was dismissed."
    label = "Claimant loses."
    orders = "The complaint of unfair dismissal is dismissed."
    reasons = ("It had been reasonably practicable to present the claim in time, so the Tribunal lacked "
               "jurisdiction.")
    prec = rng.choice([NO_PRECEDENTS[0], "Palmer v Southend-on-Sea Borough Council [1984] ICR 372 on "
                                         "reasonable practicability."])
    paras = ["The claim was presented out of time.", "It was reasonably practicable to present it in time."]
    return [facts, claims, statutes, prec, outcome, label, orders, reasons], paras


def sc_unfair_dismissal(p, rng):
    outcome_kind = rng.choice(["win", "win", "lose", "partly"])
    reason = rng.choice(["gross misconduct", "capability", "redundancy", "some other substantial reason"])
    award = money(rng, 2000, 25000)
    facts = (f"{p.claimant} was employed by {p.respondent} as a {p.job} until {p.his} dismissal. The "
             f"respondent relied on {reason} as the reason for dismissal. The claimant disputed the "
             f"fairness of the procedure followed.")
    claims = rng.choice([
        "The claimant claimed unfair dismissal and wrongful dismissal.",
        "The claimant brought complaints of unfair dismissal and breach of contract in respect of notice.",
    ])
    statutes = rng.choice([
        "Sections 94, 98 and 123 of the Employment Rights Act 1996.",
        "Section 98(4) of the Employment Rights Act 1996 and the ACAS Code of Practice on Disciplinary "
        "and Grievance Procedures.",
    ])
    prec = "; ".join(rng.sample(PRECEDENTS[:4] + PRECEDENTS[6:7], 2)) + "."
    if outcome_kind == "win":
        outcome = f"The Tribunal upheld both complaints and awarded the claimant {award}."
        label = rng.choice(["Claimant wins.", "**Claimant wins**", "“Claimant wins”."])
        orders = f"The respondent is ordered to pay compensation totalling {award}."
        reasons = (f"The investigation fell outside the band of reasonable responses, so the dismissal "
                   f"was unfair. The respondent had not shown a repudiatory breach that justified summary "
                   f"dismissal.")
    elif outcome_kind == "lose":
        outcome = "Both complaints failed and were dismissed."
        label = rng.choice(["Claimant loses.", "'Claimant loses'."])
        orders = "The claims are dismissed. No award is made."
        reasons = (f"The respondent held a genuine belief on reasonable grounds after a reasonable "
                   f"investigation, and dismissal for {reason} was within the band of reasonable "
                   f"responses.")
    else:
        outcome = (f"The unfair dismissal complaint succeeded but compensation was reduced; the wrongful "
                   f"dismissal claim failed.")
        label = rng.choice(["Claimant partly wins.", "'Claimant partly wins'.", "Claimant partially wins."])
        orders = f"The respondent shall pay a compensatory award of {award} after a Polkey reduction."
        reasons = ("The procedure was unfair, but there was a substantial chance that a fair process "
                   "would have ended in dismissal anyway. Gross misconduct was established for the "
                   "contractual claim.")
    paras = [f"The claimant worked as a {p.job}.", f"The respondent relied on {reason}."]
    return [facts, claims, statutes, prec, outcome, label, orders, reasons], paras


def sc_discrimination(p, rng):
    ground = rng.choice(["race", "sex", "disability", "age", "religion or belief", "pregnancy"])
    kind = rng.choice(["win", "lose", "lose", "partly"])
    award = money(rng, 3000, 30000)
    facts = (f"{p.claimant} worked for {p.respondent} as a {p.job}. The claimant alleged that "
             f"managers treated {p.his} differently because of {ground} and that {p.his} complaints "
             f"were ignored.")
    claims = f"The claimant brought complaints of direct {ground} discrimination, harassment and victimisation."
    statutes = "Sections 13, 26, 27 and 136 of the Equality Act 2010."
    prec = "; ".join(rng.sample([PRECEDENTS[3], PRECEDENTS[5], PRECEDENTS[8]], 2)) + "."
    if kind == "win":
        outcome = "All three complaints were upheld."
        label = rng.choice(["Claimant wins.", "Claimant wins"])
        orders = f"The respondent shall pay {award} for injury to feelings with interest."
        reasons = ("The burden shifted to the respondent, which gave no non-discriminatory explanation "
                   "for the treatment found.")
    elif kind == "lose":
        outcome = "The complaints were not well founded and were dismissed."
        label = rng.choice(["Claimant loses.", "“Claimant loses”."])
        orders = "The claims are dismissed."
        reasons = ("The Tribunal found the treatment was explained by legitimate management concerns "
                   "unconnected with the protected characteristic.")
    else:
        outcome = "The harassment complaint succeeded; the direct discrimination and victimisation complaints failed."
        label = rng.choice(["Claimant partly wins.", "Claimant partly wins"])
        orders = f"The respondent shall pay {award} for injury to feelings in respect of the harassment."
        reasons = ("One remark created an intimidating environment, but the other incidents were not "
                   "shown to be linked to the protected characteristic.")
    paras = [f"The claimant alleged {ground} discrimination.", "The Tribunal applied the burden of proof provisions."]
    return [facts, claims, statutes, prec, outcome, label, orders, reasons], paras


def sc_wages(p, rng):
    kind = rng.choice(["win", "win", "partly", "lose"])
    a, b = money(rng, 200, 3000), money(rng, 100, 1500)
    facts = (f"{p.claimant} worked for {p.respondent} as a {p.job}. The claimant said that {p.his} "
             f"final month's pay and accrued holiday were never paid, and the respondent contended "
             f"that sums had been lawfully withheld.")
    claims = "The claimant claimed unauthorised deductions from wages and accrued holiday pay."
    statutes = "Section 13 of the Employment Rights Act 1996 and regulation 14 of the Working Time Regulations 1998."
    if kind == "win":
        outcome = "Both claims succeeded."
        label = rng.choice(["Claimant wins.", "'Claimant wins'."])
        orders = f"The respondent shall pay {a} in unpaid wages and {b} in holiday pay."
        reasons = "No written authority for the deduction existed and the holiday entitlement had accrued."
    elif kind == "partly":
        outcome = "The wages claim succeeded in part and the holiday pay claim failed."
        label = "Claimant partly wins."
        orders = f"The respondent shall pay {a} as unauthorised deductions."
        reasons = "Only part of the deduction lacked contractual authority; holiday had been taken and paid."
    else:
        outcome = "Both claims failed."
        label = "Claimant loses."
        orders = "The claims are dismissed."
        reasons = "The contract expressly authorised recovery of the overpayment and all holiday had been paid."
    paras = ["The claimant's payslips were produced.", "The contract of employment was considered."]
    return [facts, claims, statutes, rng.choice(NO_PRECEDENTS), outcome, label, orders, reasons], paras


def sc_constructive(p, rng):
    kind = rng.choice(["win", "lose"])
    award = money(rng, 4000, 20000)
    facts = (f"{p.claimant} resigned from {p.his} role as a {p.job} at {p.respondent} after a change to "
             f"{p.his} shift pattern was imposed without consultation.")
    claims = "The claimant claimed constructive unfair dismissal."
    statutes = "Sections 95(1)(c) and 98 of the Employment Rights Act 1996."
    prec = f"{PRECEDENTS[4]}; {PRECEDENTS[7]}."
    if kind == "win":
        outcome = "The complaint of constructive unfair dismissal was upheld."
        label = "Claimant wins."
        orders = f"The respondent shall pay a basic and compensatory award totalling {award}."
        reasons = "Imposing the new pattern was a fundamental breach of contract and the claimant resigned in response to it."
    else:
        outcome = "The complaint was dismissed."
        label = "Claimant loses."
        orders = "The claim is dismissed."
        reasons = "The contract permitted the change, so there was no repudiatory breach by the employer."
    paras = ["The claimant resigned.", "The shift change was examined."]
    return [facts, claims, statutes, prec, outcome, label, orders, reasons], paras


SUBSTANTIVE = [sc_unfair_dismissal, sc_discrimination, sc_wages, sc_constructive]
PROCEDURAL_SUITABLE = [sc_time_limit, sc_procedural_strike_out]


def degrade(sections, aspect, p, rng):
    """Rewrite one section so that a reviewer would mark it inaccurate."""
    s = list(sections)
    if aspect == "facts":
        s[0] = f"The case concerns {p.claimant} and {p.respondent}. The hearing took place at {p.venue}."
    elif aspect == "claims":
        s[1] = "The claimant made a claim against the respondent."
    elif aspect == "general_outcome":
        s[4] = "The Tribunal reached a decision on the claims."
    elif aspect == "outcome_label":
        current = s[5].lower()
        if "other" in current:
            return s
        s[5] = "Claimant loses." if "wins" in current else "Claimant wins."
    elif aspect == "order_remedies":
        s[6] = "The Tribunal made an order."
    elif aspect == "reasons":
        s[7] = "The Tribunal gave reasons orally at the hearing."
    return s


def render(sections, rng):
    style = rng.choices(["numbered", "bold", "bullet"], weights=[6, 2, 2])[0]
    heads = [rng.choice(h) for h in HEADINGS]
    return numbered(list(zip(heads, sections)), style)


SENT = re.compile(r"(?<=[.!?])\s+|\n+")


def leaks(sections):
    def sentences(t):
        return [x.strip() for x in SENT.split(t) if len(x.strip()) >= 25]
    inputs = sections[0] + "\n" + sections[1]
    return [x for i in (4, 6, 7) for x in sentences(sections[i]) if x in inputs]


def annotation(case_id, scores, suitable, procedural, notes, index):
    part2 = {"suitable": suitable}
    if suitable:
        part2["procedural"] = procedural
    return {
        "case_id": case_id,
        "version": 1,
        "annotator_id": "annotator-1",
        "annotated_at": f"2023-0{3 + index // 100}-{1 + (index % 100) // 4:02d}T10:{index % 60:02d}:00Z",
        "part1": [{"aspect": a, "score": scores.get(a, 1)} for a in ASPECTS],
        "part2": part2,
        "notes": notes,
    }


def replay_key(case_id):
    canonical = (f"uket-replay-key/1\ntemplate_id={TEMPLATE_ID}\nversion={TEMPLATE_VERSION}\n"
                 f"case_id={case_id}\nmodel_id={MODEL_ID}\ntemperature=0\n")
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def phase_annotate(root):
    rng = random.Random(5150)
    corpus_dir = root / "corpus"
    manifest = json.loads((corpus_dir / "manifest.json").read_text(encoding="utf-8"))
    sample = json.loads((root / "sample.json").read_text(encoding="utf-8"))["case_ids"]
    assert len(sample) == 260 and all(c in sample for c in FIXED_PAGES)

    generic = [c for c in sorted(sample) if c not in FIXED_PAGES]
    rng.shuffle(generic)
    one = [c for c in generic if manifest[c]["page_count"] == 1]
    multi = [c for c in generic if manifest[c]["page_count"] > 1]
    assert len(one) == 163 - 5 and len(multi) == 97 - 1

    # Roles: (scenario, suitable, procedural, degraded aspects)
    roles = {}
    uns_one, suit_one = one[:120], one[120:]
    uns_multi, suit_multi = multi[:12], multi[12:]
    assert len(suit_one) == 38 and len(suit_multi) == 84

    it = iter(uns_one)
    for where, n in (("fsr", 9), ("s", 9), ("sr", 6)):
        for _ in range(n):
            roles[next(it)] = (lambda p, r, w=where: sc_rule21(p, r, w), 0, None, [])
    for _ in range(15):
        roles[next(it)] = (lambda p, r: sc_withdrawal(p, r, True), 0, None, ["outcome_label"])
    for _ in range(10):
        roles[next(it)] = (lambda p, r: sc_withdrawal(p, r, False), 0, None, [])
    rest = list(it)
    for i, c in enumerate(rest):
        roles[c] = (rng.choice([sc_procedural_strike_out, sc_preliminary, sc_time_limit]), 0, None, [])
    # unsuitable degradations: facts x4, claims x1, label x1
    for c in rest[:4]:
        roles[c] = roles[c][:3] + (["facts"],)
    roles[rest[4]] = roles[rest[4]][:3] + (["claims"],)
    roles[rest[5]] = (sc_procedural_strike_out, 0, None, ["outcome_label"])
    truncated = rest[6]
    for c in uns_multi:
        roles[c] = (sc_preliminary, 0, None, [])

    suitable = suit_one + suit_multi
    for i, c in enumerate(suitable):
        if i < 27:
            roles[c] = (rng.choice(PROCEDURAL_SUITABLE), 1, 1, [])
        else:
            roles[c] = (rng.choice(SUBSTANTIVE), 1, 0, [])
    pool = [c for c in suitable if roles[c][2] == 0]
    degrade_plan = (["facts"] * 10 + ["claims"] * 3 + ["outcome_label"] * 6 + ["general_outcome"]
                    + ["order_remedies"] + ["reasons"])
    for c, aspect in zip(pool, degrade_plan):
        roles[c] = roles[c][:3] + ([aspect],)

    cache_dir = root / "cache"
    ann_dir = root / "annotations"
    cache_dir.mkdir(exist_ok=True)
    ann_dir.mkdir(exist_ok=True)
    for d in (cache_dir, ann_dir):
        for f in d.iterdir():
            f.unlink()

    fixed_responses = {GOLDEN_1: GOLDEN_1_RESPONSE, GOLDEN_2: GOLDEN_2_RESPONSE, **reviewed_responses()}
    fixed_roles = {
        GOLDEN_1: ({}, 0, None, "Respondent failed to respond; reasons repeat a sentence of the facts."),
        GOLDEN_2: ({}, 1, 0, ""),
        REVIEWED_1: ({"outcome_label": 0}, 0, None, "Withdrawal is labelled claimant loses."),
        REVIEWED_2: ({"facts": 0}, 0, None, "Facts omit the unauthorised deductions."),
        REVIEWED_3: ({"claims": 0}, 0, None, "Claims section implies an identified claim."),
        REVIEWED_4: ({}, 1, 0, "Reasons absent from the judgment."),
    }

    for index, case_id in enumerate(sample):
        meta = manifest[case_id]
        pages = meta["page_count"]
        prng = random.Random(f"{case_id}-parties")
        p = Parties(prng)
        p.title, rest_name = meta["claimants"][0].split(" ", 1)
        p.initial, p.surname = rest_name.split(" ", 1)
        p.he = "he" if p.title == "Mr" else "she"
        p.his = "his" if p.title == "Mr" else "her"
        p.respondent = " and ".join(meta["respondents"])
        p.venue = meta["hearing_venue"]
        p.judge = meta["judges"][0]
        crng = random.Random(f"{case_id}-content")
        if case_id in fixed_responses:
            response = fixed_responses[case_id]
            scores, suit, proc, notes = fixed_roles[case_id]
            paras = [re.sub(r"^[-\d.\s]*\**[^:]*:\**\s*", "", line)
                     for line in response.split("\n") if line.strip()][:6]
        else:
            scenario, suit, proc, bad = roles[case_id]
            sections, paras = scenario(p, crng)
            for aspect in bad:
                sections = degrade(sections, aspect, p, crng)
            if case_id == truncated:
                sections[6] = ("The first claimant's claim is dismissed. The claims of the second and third "
                               "claimants are similarly organised and are also dismissed.")
            if suit:
                assert not leaks(sections), case_id
            response = render(sections, crng)
            scores = {a: 0 for a in bad}
            notes = "; ".join(f"{a} inaccurate" for a in bad)
        (corpus_dir / (case_id.replace("/", "_") + ".txt")).write_text(
            body_text(case_id, p, pages, paras, crng), encoding="utf-8")
        key = replay_key(case_id)
        (cache_dir / f"{key}.txt").write_text(response, encoding="utf-8")
        meta_json = {
            "replay_key": key, "template_id": TEMPLATE_ID, "version": TEMPLATE_VERSION,
            "case_id": case_id, "model_id": MODEL_ID, "temperature": 0.0,
            "prompt_tokens": 0, "completion_tokens": 0,
        }
        (cache_dir / f"{key}.json").write_text(json.dumps(meta_json, indent=2) + "\n", encoding="utf-8")
        ann = annotation(case_id, scores, suit, proc, notes, index)
        (ann_dir / (case_id.replace("/", "_") + ".json")).write_text(
            json.dumps(ann, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"annotated {len(sample)} cases")


def main():
    if len(sys.argv) != 3 or sys.argv[1] not in ("corpus", "annotate"):
        sys.exit("usage: generate_fixture.py corpus|annotate <fixture-dir>")
    root = Path(sys.argv[2])
    if sys.argv[1] == "corpus":
        phase_corpus(root)
    else:
        phase_annotate(root)


if __name__ == "__main__":
    main()
