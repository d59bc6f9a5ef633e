"""Result records shared by every exhaustive checker."""

from dataclasses import dataclass, field

# Failures kept per report; the count keeps going past this.
KEEP_FAILURES = 100


@dataclass
class Failure:
    sizes: tuple
    inputs: dict
    lhs: object
    rhs: object

    @property
    def difference(self):
        return self.lhs - self.rhs


@dataclass
class CheckReport:
    axiom: str
    structure: str
    instances: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    truncated: bool = False

    @property
    def passed(self):
        return self.failure_count == 0

    def record(self, sizes, inputs, lhs, rhs):
        self.instances += 1
        if lhs != rhs:
            self.failure_count += 1
            if len(self.failures) < KEEP_FAILURES:
                self.failures.append(Failure(tuple(sizes), dict(inputs), lhs, rhs))

    def merge(self, other):
        """Append ``other``'s results, as if its instances ran after ours."""
        self.instances += other.instances
        self.failure_count += other.failure_count
        room = KEEP_FAILURES - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])
        self.truncated = self.truncated or other.truncated

    def summary(self):
        status = "pass" if self.passed else "FAIL"
        extra = " (truncated)" if self.truncated else ""
        return (f"{self.structure} {self.axiom}: {status}, "
                f"{self.instances} instances, {self.failure_count} failures{extra}")
