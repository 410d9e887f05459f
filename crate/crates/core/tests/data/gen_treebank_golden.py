"""Regenerates treebank_golden.jsonl from NLTK's TreebankWordTokenizer.

The section sign is padded with spaces before tokenizing, matching the
crate's rule that splits it off like `$` and `%`.
"""
import json
import sys

from nltk.tokenize import TreebankWordTokenizer

CASES = [
    "",
    "Hello, world.",
    "the taxpayer's liability",
    "They'll save and invest more.",
    "hi, my name can't hello,",
    "Good muffins cost $3.88\nin New York.  Please buy me\ntwo of them.\nThanks.",
    "Good muffins cost $3.88 (roughly 3,36 euros)\nin New York.",
    "For purposes of this section, the term \"qualified person\" means--",
    "(1) In general.--Except as provided in paragraph (2), no deduction shall be allowed.",
    "26 U.S.C. § 501(c)(3) organizations are exempt.",
    "as defined in section 501(c)(3) of title 26, United States Code;",
    "See sections 1001 through 1005 of this title.",
    "§§ 7, 8, and 9 of title 18 apply: 'notwithstanding' any other provision...",
    "The Secretary shall (A) submit a report; and (B) publish it [if required].",
    "He said, ``It wasn't me,'' and left!",
    "Is it 50% or 60%? Nobody knows.",
    "'Tis the season; 'twas the night. I'd gotta gimme a lemme.",
    "Don't you wanna know? D'ye gonna tell 'em?",
    "A total of $1,000,000 shall be appropriated for fiscal year 2010.",
    "email@example.com & co. #1 item",
    "The term 'State' includes the District of Columbia.",
    "subsection (a)(1)(B)(ii)(I) of this section.",
    "The amendments made by this Act shall take effect on January 1, 2009.",
    "Cannot, Gonna, gotta, MORE'N, can not.",
    "Nested {braces} and <angles> with 'single' quotes' end.",
    "A line ending with a colon:",
    "Trailing quote.\"",
    "Multiple...dots....here",
    "Amounts: $5; 10%; and #3.",
    "Über die Straße, à la carte.",
    "“Curly quotes” and ‘single curly’ marks.",
    "He's, she'd, we'm, I'm, they've, you're.",
    "Tab\tseparated\ttokens, and\r\nCRLF lines.",
]


def main():
    tok = TreebankWordTokenizer()
    out = sys.stdout
    for text in CASES:
        tokens = tok.tokenize(text.replace("§", " § "))
        out.write(json.dumps({"text": text, "tokens": tokens}, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
