#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <vector>

#include "jcmap/digest.hpp"
#include "jcmap/rng.hpp"

using jcmap::SplitMix64;

TEST_SUITE_BEGIN("rng");

TEST_CASE("splitmix64 matches the reference sequence") {
  // First outputs of the reference implementation for state 0.
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
  CHECK(rng.next() == 0xF88BB8A8724C81ECULL);

  SplitMix64 rng42(42);
  CHECK(rng42.next() == 0xBDD732262FEB6E95ULL);
  CHECK(rng42.next() == 0x28EFE333B266F103ULL);
}

TEST_CASE("next_below stays in range and covers the range") {
  SplitMix64 rng(7);
  std::vector<int> hits(10, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto v = rng.next_below(10);
    REQUIRE(v < 10);
    ++hits[static_cast<std::size_t>(v)];
  }
  for (int h : hits) CHECK(h > 800);  // roughly uniform
}

TEST_CASE("shuffle is a permutation and reproducible") {
  std::vector<int> a(100);
  std::iota(a.begin(), a.end(), 0);
  std::vector<int> b = a;

  SplitMix64 r1(123), r2(123);
  jcmap::shuffle(a, r1);
  jcmap::shuffle(b, r2);
  CHECK(a == b);

  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expect(100);
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(sorted == expect);

  std::vector<int> c = expect;
  SplitMix64 r3(124);
  jcmap::shuffle(c, r3);
  CHECK(c != a);  // different seed, different order
}

TEST_CASE("branch seeds differ across branches and compose") {
  const std::uint64_t root = 99;
  CHECK(jcmap::branch_seed(root, 1) != jcmap::branch_seed(root, 2));
  CHECK(jcmap::branch_seed(root, 1) != root);
  // folding is deterministic
  CHECK(jcmap::branch_seed(jcmap::branch_seed(root, 1), 3) ==
        jcmap::branch_seed(jcmap::branch_seed(root, 1), 3));
}

TEST_CASE("sha256 known vectors") {
  CHECK(jcmap::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(jcmap::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(jcmap::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_SUITE_END();
