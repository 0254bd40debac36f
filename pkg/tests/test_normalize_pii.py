"""Normalization and PII redaction stages."""

import json
from hypothesis import given, settings
from hypothesis import strategies as st

from jlmkit.pipeline import Document, normalize_document, normalize_text
from jlmkit.pipeline.pii import redact_text, redact_pii


class TestNormalize:
    def test_fullwidth_folds_to_ascii(self):
        doc = Document(doc_id="d1", text="ＡＢＣ１２３")
        out, outcome = normalize_document(doc)
        assert out.text == "ABC123"
        assert outcome.verdict == "modified"

    def test_already_normalized_is_kept(self):
        doc = Document(doc_id="d1", text="plain ascii text")
        out, outcome = normalize_document(doc)
        assert out.text == doc.text
        assert outcome.verdict == "kept"

    def test_crlf_becomes_lf(self):
        doc = Document(doc_id="d1", text="line one\r\nline two")
        out, outcome = normalize_document(doc)
        assert out.text == "line one\nline two"
        assert outcome.verdict == "modified"

    def test_blank_line_runs_collapse_to_two(self):
        text = "a\n\n\n\n\nb"
        assert normalize_text(text) == "a\n\n\nb"  # two blank lines kept

    def test_control_chars_removed_except_tab_lf(self):
        out = normalize_text("a\x00b\tc\x1fd")
        assert out == "ab\tcd"

    def test_per_line_strip(self):
        assert normalize_text("  hello  \n  world  ") == "hello\nworld"

    @given(st.text(max_size=200))
    @settings(max_examples=200, deadline=None)
    def test_idempotent(self, text):
        once = normalize_text(text)
        assert normalize_text(once) == once


class TestRedaction:
    def test_email_contract(self):
        text, counts = redact_text("contact: foo@bar.com")
        assert text == "contact: [EMAIL]"
        assert counts["email"] == 1

    def test_phone_contract(self):
        text, counts = redact_text("tel: 090-1234-5678")
        assert text == "tel: [PHONE]"
        assert counts["phone"] == 1

    def test_idempotent(self):
        once, counts1 = redact_text("mail a@b.com phone 03-1234-5678")
        twice, counts2 = redact_text(once)
        assert twice == once
        assert sum(counts2.values()) == 0

    def test_fixture_precision_and_recall(self, fixtures_dir):
        cases = json.loads((fixtures_dir / "pii_cases.json").read_text())
        positives = cases["positives"]
        negatives = cases["negatives"]
        assert len(positives) + len(negatives) == 40

        redacted_count = 0
        for case in positives:
            text, counts = redact_text(case["text"])
            if sum(counts.values()) > 0:
                redacted_count += 1
        assert redacted_count >= 0.95 * len(positives)

        for case in negatives:
            text, counts = redact_text(case["text"])
            assert sum(counts.values()) == 0, f"false positive: {case['text']}"
            assert text == case["text"]

    def test_only_matched_spans_change(self):
        text = "before foo@bar.com middle 090-1234-5678 after"
        redacted, _ = redact_text(text)
        assert redacted == "before [EMAIL] middle [PHONE] after"

    def test_outcome_counts_per_category(self):
        doc = Document(doc_id="d", text="a@b.com and c@d.org, tel 03-1111-2222")
        out, outcome = redact_pii(doc)
        assert outcome.detail == {"email": 2, "phone": 1}
        assert outcome.verdict == "modified"

    @given(st.lists(
        st.text(alphabet="あいう漢字 xyz。\n", min_size=1, max_size=30),
        min_size=2, max_size=5,
    ))
    @settings(max_examples=100, deadline=None)
    def test_never_touches_text_outside_matched_spans(self, fragments):
        # interleave clean fragments with PII spans; after redaction the
        # clean fragments must reappear verbatim, in order
        # spans are space-separated so fragments cannot merge into them
        # (an adjacent alphanumeric legally extends an email local part)
        spans = [" user@example.com ", " 090-1234-5678 "]
        pieces = []
        for i, fragment in enumerate(fragments):
            pieces.append(fragment)
            pieces.append(spans[i % 2])
        pieces.append(fragments[0])
        text = "".join(pieces)
        redacted, counts = redact_text(text)
        assert sum(counts.values()) >= len(fragments)
        cursor = 0
        for fragment in fragments + [fragments[0]]:
            at = redacted.find(fragment, cursor)
            assert at != -1, f"fragment {fragment!r} damaged"
            cursor = at + len(fragment)
