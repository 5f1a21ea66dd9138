import dataclasses
import json

import numpy as np

from thermswipt import cli, validate
from thermswipt.channel import build_channel


def _flipped_subdiagonal(params, real):
    ch = build_channel(params, real)
    b = ch.matrix_b.copy()
    idx = np.arange(1, ch.n)
    b[idx, idx - 1] *= -1.0
    return dataclasses.replace(ch, matrix_b=b)


def test_suite_passes_quickly():
    lines = []
    ok, results, elapsed = validate.run_validate(echo=lines.append)
    assert ok, "\n".join(c.line() for c in results if not c.passed)
    assert elapsed < 60.0
    assert len(lines) == len(results) + 1
    assert all(line.startswith("[PASS]") for line in lines[:-1])


def test_mutated_inverse_is_caught():
    check = validate.check_inverse_identity(build=_flipped_subdiagonal)
    assert not check.passed
    assert check.measured > 1e-3
    assert "FAIL" in check.line()


def test_unmutated_inverse_passes():
    assert validate.check_inverse_identity().passed


def test_unreduced_audit_is_reported():
    checks = validate.check_energy_closed_forms()
    audit = [c for c in checks if "unreduced" in c.name]
    assert audit, [c.name for c in checks]
    assert all(c.measured > 1e-3 for c in audit)


def test_cli_validate_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["validate", "--out", str(out)]) == cli.EXIT_OK
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert report["seconds"] < 60
    assert "checks passed" in capsys.readouterr().out


def test_cli_validate_failure_exit_code(monkeypatch):
    def broken():
        return validate.check_inverse_identity(build=_flipped_subdiagonal)

    real_run = validate.run_validate
    monkeypatch.setattr(cli, "run_validate", lambda: real_run(checks=[broken]))
    assert cli.main(["validate"]) == cli.EXIT_VALIDATION
