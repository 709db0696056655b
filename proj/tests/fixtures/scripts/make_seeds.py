#!/usr/bin/env python3
"""Writes the seed corpus fixtures and runs each solution against its tests."""
import json
import pathlib
import subprocess
import sys
import tempfile

S = []


def seed(task_id, signature, docstring, solution, tests):
    S.append({"task_id": task_id, "language": "Python", "docstring": docstring,
              "signature": signature, "solution": solution, "tests": tests})


seed("seed/000", "def below_zero(operations: List[int]) -> bool:",
     '"""You\'re given a list of deposit and withdrawal operations on a bank account that starts with\n'
     'zero balance. Your task is to detect if at any point the balance of account falls below zero, and\n'
     'at that point function should return True. Otherwise it should return False.\n'
     '>>> below_zero([1, 2, -4, 5])\nTrue\n"""',
     "    balance = 0\n    for op in operations:\n        balance += op\n        if balance < 0:\n            return True\n    return False\n",
     "assert below_zero([1, 2, -4, 5]) is True\nassert below_zero([1, 2, 3]) is False\n")
seed("seed/001", "def sum_even(numbers: List[int]) -> int:",
     '"""Return the sum of the even values in numbers."""',
     "    return sum(n for n in numbers if n % 2 == 0)\n",
     "assert sum_even([1, 2, 3, 4]) == 6\nassert sum_even([]) == 0\n")
seed("seed/002", "def count_vowels(text: str) -> int:",
     '"""Count the vowels in text. Only a, e, i, o and u count, in either case."""',
     "    return sum(1 for ch in text.lower() if ch in 'aeiou')\n",
     "assert count_vowels('Hello') == 2\nassert count_vowels('xyz') == 0\n")
seed("seed/003", "def max_element(values: List[int]) -> int:",
     '"""Return the largest number in values.\nIf a value is larger than the current best, keep it."""',
     "    best = values[0]\n    for v in values[1:]:\n        if v > best:\n            best = v\n    return best\n",
     "assert max_element([3, 9, 2]) == 9\nassert max_element([-1]) == -1\n")
seed("seed/004", "def is_palindrome(text: str) -> bool:",
     '"""Check whether text reads the same forwards and backwards."""',
     "    return text == text[::-1]\n",
     "assert is_palindrome('abba')\nassert not is_palindrome('abc')\n")
seed("seed/005", "def word_lengths(words: List[str]) -> Dict[str, int]:",
     '"""Map each word in words to its length."""',
     "    return {w: len(w) for w in words}\n",
     "assert word_lengths(['ab', 'c']) == {'ab': 2, 'c': 1}\n")
seed("seed/006", "def find_index(items: List[int], target: int) -> Optional[int]:",
     '"""Return the first position of target in items.\nIf target does not occur, return None."""',
     "    for i, v in enumerate(items):\n        if v == target:\n            return i\n    return None\n",
     "assert find_index([4, 5, 6], 5) == 1\nassert find_index([], 1) is None\n")
seed("seed/007", "def scale_all(values: List[float], factor: float) -> List[float]:",
     '"""Multiply each of the values by factor and return the new list."""',
     "    return [v * factor for v in values]\n",
     "assert scale_all([1.0, 2.5], 2.0) == [2.0, 5.0]\n")
seed("seed/008", "def gcd(a: int, b: int) -> int:",
     '"""Return the greatest common divisor of a and b."""',
     "    while b:\n        a, b = b, a % b\n    return a\n",
     "assert gcd(12, 18) == 6\nassert gcd(7, 0) == 7\n")
seed("seed/009", "def is_prime(n: int) -> bool:",
     '"""Decide whether n is a prime number.\nIf n is below two, it is not prime."""',
     "    if n < 2:\n        return False\n    d = 2\n    while d * d <= n:\n        if n % d == 0:\n            return False\n        d += 1\n    return True\n",
     "assert is_prime(13)\nassert not is_prime(1)\nassert not is_prime(21)\n")
seed("seed/010", "def fizzbuzz(n: int) -> List[str]:",
     '"""Return the FizzBuzz strings for 1 up to n.\nIf a number is divisible by 3 and 5, use FizzBuzz."""',
     "    out = []\n    for i in range(1, n + 1):\n        if i % 15 == 0:\n            out.append('FizzBuzz')\n        elif i % 3 == 0:\n            out.append('Fizz')\n        elif i % 5 == 0:\n            out.append('Buzz')\n        else:\n            out.append(str(i))\n    return out\n",
     "assert fizzbuzz(5) == ['1', '2', 'Fizz', '4', 'Buzz']\n")
seed("seed/011", "def reverse_words(sentence: str) -> str:",
     '"""Reverse the order of the words in sentence."""',
     "    return ' '.join(reversed(sentence.split()))\n",
     "assert reverse_words('a b c') == 'c b a'\n")
seed("seed/012", "def count_positive(grid: List[List[int]]) -> int:",
     '"""Count the cells of grid that hold a positive number.\nWalk every row and every cell."""',
     "    return sum(1 for row in grid for cell in row if cell > 0)\n",
     "assert count_positive([[1, -1], [2, 0]]) == 2\n")
seed("seed/013", "def running_total(values: List[int]) -> List[int]:",
     '"""Return the prefix sums of values."""',
     "    out, acc = [], 0\n    for v in values:\n        acc += v\n        out.append(acc)\n    return out\n",
     "assert running_total([1, 2, 3]) == [1, 3, 6]\n")
seed("seed/014", "def clamp(x: float, lo: float, hi: float) -> float:",
     '"""Limit x to the closed range from lo to hi.\nIf x is below lo, return lo."""',
     "    return max(lo, min(x, hi))\n",
     "assert clamp(5.0, 0.0, 1.0) == 1.0\nassert clamp(-1.0, 0.0, 1.0) == 0.0\n")
seed("seed/015", "def dedupe(items: List[str]) -> List[str]:",
     '"""Drop repeated entries from items, keeping the first occurrence of each."""',
     "    seen, out = set(), []\n    for s in items:\n        if s not in seen:\n            seen.add(s)\n            out.append(s)\n    return out\n",
     "assert dedupe(['a', 'b', 'a']) == ['a', 'b']\n")
seed("seed/016", "def digit_sum(n: int) -> int:",
     '"""Add up the decimal digits of n, ignoring its sign."""',
     "    return sum(int(c) for c in str(abs(n)))\n",
     "assert digit_sum(-123) == 6\n")
# rejects
seed("seed/017", "def average(values: List[float]) -> float:",
     '"""Return the arithmetic mean of values."""',
     "",
     "assert average([1.0, 3.0]) == 2.0\n")
seed("seed/018", "def flatten(nested: List[List[int]]) -> List[int]:",
     '"""Concatenate the inner lists of nested."""',
     "    pass\n",
     "assert flatten([[1], [2, 3]]) == [1, 2, 3]\n")
seed("seed/019", "def repeat_string(text: str, times: int) -> str:",
     '"""Repeat the string several times."""',
     "    return text * times\n",
     "assert repeat_string('ab', 2) == 'abab'\n")

REJECTS = {"seed/017", "seed/018", "seed/019"}
here = pathlib.Path(__file__).resolve().parent.parent
(here / "seeds.jsonl").write_text("".join(json.dumps(s) + "\n" for s in S))
(here / "seeds_keep.txt").write_text("".join(s["task_id"] + "\n" for s in S if s["task_id"] not in REJECTS))
# Two duplicate ids among 20 lines: 18 unique samples, 2 warnings.
dup = [dict(s) for s in S[:18]] + [dict(S[3]), dict(S[7])]
dup[18]["solution"] = "    return max(values)\n"
(here / "seeds_duplicates.jsonl").write_text("".join(json.dumps(s) + "\n" for s in dup))

failed = 0
with tempfile.TemporaryDirectory() as tmp:
    for s in S:
        if s["task_id"] in REJECTS:
            continue
        src = ("from typing import Dict, List, Optional\n\n" + s["signature"] + "\n" +
               "\n".join("    " + l if l else l for l in s["docstring"].splitlines()) + "\n" +
               s["solution"] + "\n" + s["tests"])
        f = pathlib.Path(tmp) / "seed.py"
        f.write_text(src)
        p = subprocess.run([sys.executable, str(f)], capture_output=True, text=True)
        if p.returncode != 0:
            failed += 1
            print(s["task_id"], p.stderr, file=sys.stderr)
print(f"{len(S)} seeds, {len(S) - len(REJECTS)} kept, solution failures: {failed}")
sys.exit(1 if failed else 0)
