# scripts/djtest_api_prove.py
# python manage.py shell < scripts/djtest_api_prove.py
from django.test import Client
import json
from pathlib import Path

c = Client()
problem = Path("prover/problems/sev241_5.p").read_text(encoding="utf-8")

r = c.post(
    "/api/prove",
    data=json.dumps({"problem": problem, "timeout": 5}),
    content_type="application/json",
)
print("STATUS:", r.status_code)
try:
    data = r.json()
except Exception:
    print("RAW:", r.content[:400])
else:
    print("RESULT:", data)
