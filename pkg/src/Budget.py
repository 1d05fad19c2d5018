import threading


class BudgetExceeded(RuntimeError):
    def __init__(self, counter: str, limit: int):
        super().__init__(f"Budget exceeded: {counter} > {limit}")
        self.counter = counter
        self.limit = limit


class Budget:
    def __init__(
            self,
            max_kt_expansions: int = 2_000_000,
            max_fabrication_steps: int = 2_000_000,
            max_saturation_rounds: int = 1_000,
            max_enumerated: int = 5_000_000):
        """
        Resource caps shared by the engines. Counters are deterministic
        (no wall clock), so the same inputs always exhaust the same budget.

        Parameters:
        - max_kt_expansions (int): Type checks performed by the K_t tableau.
        - max_fabrication_steps (int): Goals expanded / candidates examined by
          the fabrication engines.
        - max_saturation_rounds (int): Rounds of bottom-up saturation.
        - max_enumerated (int): Bi-traces and biboundaries produced by the
          enumerators.
        """
        self.limits = {
            "kt_expansions": max_kt_expansions,
            "fabrication_steps": max_fabrication_steps,
            "saturation_rounds": max_saturation_rounds,
            "enumerated": max_enumerated,
        }
        self.spent = {name: 0 for name in self.limits}
        self._lock = threading.Lock()

    def charge(self, counter: str, amount: int = 1):
        """
        Spend ``amount`` units of ``counter``.

        Raises:
            BudgetExceeded: When the counter passes its limit.
        """
        with self._lock:
            self.spent[counter] += amount
            exceeded = self.spent[counter] > self.limits[counter]
        if exceeded:
            raise BudgetExceeded(counter, self.limits[counter])

    def reset(self):
        self.spent = {name: 0 for name in self.limits}

    def __repr__(self):
        args = ", ".join(f"max_{name}={limit}" for name, limit in self.limits.items())
        return f"Budget({args})"

    def __str__(self):
        output = "Budget:\n"
        for name, limit in self.limits.items():
            output += f"  {name}: {self.spent[name]} / {limit}\n"
        return output
