#!/usr/bin/env python3
# Line-delimited JSON provider used by the tests.
import json
import sys

TRANSLATIONS = {"Ehud Prawer": "إيهود براور", "ethnocentrism": "المركزية الإثنية"}

for line in sys.stdin:
    req = json.loads(line)
    op, text = req["op"], req["text"]
    if text == "crash":
        sys.exit(1)
    if op == "translate":
        if text in TRANSLATIONS:
            reply = {"ok": True, "value": TRANSLATIONS[text]}
        else:
            reply = {"ok": False, "error": "unknown term"}
    elif op == "transliterate":
        reply = {"ok": True, "value": text.upper()}
    elif op == "embed":
        reply = {"ok": True, "value": [float(len(text)), 1.0]}
    elif op == "ner":
        value = "ORG" if text.startswith("شركة") else None
        if req.get("context") == "PERSON":
            value = "PER"
        reply = {"ok": True, "value": value}
    elif op == "pos":
        reply = {"ok": True, "value": "noun"}
    else:
        reply = {"ok": False, "error": "bad op"}
    sys.stdout.write(json.dumps(reply, ensure_ascii=False) + "\n")
    sys.stdout.flush()
