#include <algorithm>
#include <set>

#include "doctest.h"
#include "evotransit/error.hpp"
#include "evotransit/mutation.hpp"
#include "fixtures.hpp"

using namespace evotransit;

namespace {

TransitionState fresh(std::size_t w, std::size_t h, std::uint64_t seed = 1) {
  const auto pair = fixtures::all_differing(w, h, seed);
  return TransitionState::build(pair.start, pair.target);
}

// State with the first `t_count` mutable cells (rank order) in T.
TransitionState with_t_prefix(std::size_t w, std::size_t h, std::size_t t_count) {
  auto state = fresh(w, h);
  std::vector<CellState> a(state.mutable_total(), CellState::S);
  std::fill_n(a.begin(), t_count, CellState::T);
  state.assign(a);
  return state;
}

std::set<std::size_t> cells_of(const MutationDelta& d) {
  std::set<std::size_t> out;
  for (const Flip& f : d.flips) out.insert(f.cell);
  return out;
}

}  // namespace

TEST_CASE("operator spec validation") {
  OperatorSpec spec;
  CHECK_NOTHROW(spec.validate());
  spec.c_s = 0.5;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.c_t = 0.99;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.box_size = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.kind = OperatorKind::Composite;
  spec.composite_partner = OperatorKind::Standard;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.composite_partner = OperatorKind::Box;
  spec.interleave = {0, 1};
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("operator defaults") {
  const OperatorSpec spec;
  CHECK(spec.c_s == 100.0);
  CHECK(spec.c_t == 50.0);
  CHECK(spec.strip_length == 180);
  CHECK(spec.h_strip == Extent{200, 40});
  CHECK(spec.v_strip == Extent{1, 200});
  CHECK(spec.box_size == 3);
  CHECK(spec.interleave == Interleave{1, 1});
}

TEST_CASE("standard mutation") {
  SUBCASE("a single mutable cell always toggles") {
    auto one = fresh(1, 1);
    for (Sampling sampling : {Sampling::PerCell, Sampling::GeometricSkip}) {
      Rng rng(3);
      for (int i = 0; i < 50; ++i) {
        const auto d = standard_mutation(one, rng, sampling);
        REQUIRE(d.flips.size() == 1);
        CHECK(d.flips[0].to == CellState::T);
      }
    }
  }
  SUBCASE("per-cell sampling spends exactly one draw per mutable cell") {
    auto state = fresh(9, 7);
    Rng used(17);
    (void)standard_mutation(state, used, Sampling::PerCell);
    Rng reference(17);
    for (std::size_t i = 0; i < state.mutable_total(); ++i) (void)reference.next();
    CHECK(used.next() == reference.next());
  }
  SUBCASE("per-cell flips follow the documented draw rule") {
    auto state = with_t_prefix(6, 5, 11);
    Rng rng(8);
    Rng replay(8);
    for (int round = 0; round < 200; ++round) {
      const auto d = standard_mutation(state, rng, Sampling::PerCell);
      std::vector<Flip> expected;
      for (std::size_t cell : state.mutable_cells()) {
        if (replay.uniform01() < 1.0 / 30.0) expected.push_back({cell, opposite(state.at(cell))});
      }
      REQUIRE(d.flips == expected);
    }
  }
  SUBCASE("mean flips per proposal is 1 on a 40000-cell state") {
    // Expected value 1 = mutable_total * (1 / mutable_total).
    auto big = fresh(200, 200);
    Rng rng(1234);
    double total = 0;
    constexpr int kProposals = 100000;
    for (int i = 0; i < kProposals; ++i) total += double(standard_mutation(big, rng, Sampling::GeometricSkip).flips.size());
    CHECK(total / kProposals == doctest::Approx(1.0).epsilon(0.05));

    auto small = fresh(20, 20);
    total = 0;
    for (int i = 0; i < kProposals; ++i) total += double(standard_mutation(small, rng, Sampling::PerCell).flips.size());
    CHECK(total / kProposals == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("asymmetric mutation") {
  CHECK(asymmetric_s_probability(40000, 100.0) == 1.0 / 800.0);
  CHECK(asymmetric_t_probability(0, 50.0) == 0.0);
  CHECK(asymmetric_s_probability(10, 100.0) == 1.0);

  SUBCASE("no T cells means no T->S flips") {
    auto state = fresh(50, 50);
    for (Sampling sampling : {Sampling::PerCell, Sampling::GeometricSkip}) {
      Rng rng(4);
      for (int i = 0; i < 200; ++i) CHECK(asymmetric_mutation(state, 100, 50, rng, sampling).t_to_s() == 0);
    }
  }
  SUBCASE("mean S->T flips is c_s/2 when count_s >= c_s/2") {
    auto state = with_t_prefix(200, 200, 10000);
    Rng rng(99);
    double s_to_t = 0;
    double t_to_s = 0;
    constexpr int kProposals = 100000;
    for (int i = 0; i < kProposals; ++i) {
      const auto d = asymmetric_mutation(state, 100, 50, rng, Sampling::GeometricSkip);
      s_to_t += double(d.s_to_t());
      t_to_s += double(d.t_to_s());
    }
    CHECK(s_to_t / kProposals == doctest::Approx(50.0).epsilon(0.02));
    CHECK(t_to_s / kProposals == doctest::Approx(25.0).epsilon(0.02));
  }
  SUBCASE("small classes are clamped: every S cell flips") {
    auto state = with_t_prefix(10, 10, 97);
    Rng rng(1);
    for (Sampling sampling : {Sampling::PerCell, Sampling::GeometricSkip}) {
      const auto d = asymmetric_mutation(state, 100, 50, rng, sampling);
      CHECK(d.s_to_t() == 3);
    }
  }
  SUBCASE("skip sampling emits S flips before T flips, each in row-major order") {
    auto state = with_t_prefix(30, 30, 450);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      const auto d = asymmetric_mutation(state, 100, 50, rng, Sampling::GeometricSkip);
      const auto split = std::find_if(d.flips.begin(), d.flips.end(), [](const Flip& f) { return f.to == CellState::S; });
      CHECK(std::all_of(split, d.flips.end(), [](const Flip& f) { return f.to == CellState::S; }));
      CHECK(std::is_sorted(d.flips.begin(), split, [](const Flip& a, const Flip& b) { return a.cell < b.cell; }));
      CHECK(std::is_sorted(split, d.flips.end(), [](const Flip& a, const Flip& b) { return a.cell < b.cell; }));
    }
  }
}

TEST_CASE("strip geometry") {
  auto state = fresh(200, 200);
  const Extent strip{1, 180};
  SUBCASE("rows 10..189 at the anchor column") {
    const auto d = region_delta(state, {10, 33}, strip);
    REQUIRE(d.flips.size() == 180);
    CHECK(state.coord_of(d.flips.front().cell) == PixelCoord{10, 33});
    CHECK(state.coord_of(d.flips.back().cell) == PixelCoord{189, 33});
  }
  SUBCASE("clipped at the bottom border") {
    const auto d = region_delta(state, {150, 0}, strip);
    CHECK(d.flips.size() == 50);
    CHECK(state.coord_of(d.flips.back().cell) == PixelCoord{199, 0});
  }
  SUBCASE("cells already in T and fixed cells are skipped") {
    Raster start(1, 10, {0, 0, 0});
    Raster target(1, 10, {1, 1, 1});
    target[4] = start[4];
    auto s = TransitionState::build(start, target);
    s.apply(std::vector<Flip>{{2, CellState::T}});
    const auto d = region_delta(s, {0, 0}, {1, 180});
    const auto cells = cells_of(d);
    CHECK(d.flips.size() == 8);
    CHECK(!cells.contains(2));
    CHECK(!cells.contains(4));
  }
  SUBCASE("random strips never lower fitness") {
    Rng rng(6);
    for (int i = 0; i < 300; ++i) {
      const auto d = strip_mutation(state, 180, rng);
      CHECK(d.proposal_kind == OperatorKind::Strip);
      CHECK(d.t_to_s() == 0);
      state.apply(d.flips);
    }
    CHECK(state.recount_matches());
  }
}

TEST_CASE("combined strip geometry") {
  auto state = fresh(200, 200);
  CHECK(region_delta(state, {0, 0}, {200, 40}).flips.size() == 8000);
  CHECK(region_delta(state, {180, 0}, {200, 40}).flips.size() == 20 * 200);
  CHECK(region_delta(state, {0, 77}, {1, 200}).flips.size() == 200);
  CHECK(region_delta(state, {120, 77}, {1, 200}).flips.size() == 80);

  Rng rng(12);
  int horizontal = 0;
  constexpr int kProposals = 4000;
  for (int i = 0; i < kProposals; ++i) {
    const auto d = combined_strip_mutation(state, {200, 40}, {1, 200}, rng);
    CHECK(d.flips.size() <= 8000);
    if (d.flips.empty()) continue;
    // A vertical strip covers a single column; a horizontal one clipped to
    // one column (anchor col 199) is rare enough to ignore.
    const auto first = state.coord_of(d.flips.front().cell);
    const bool single_column = std::all_of(d.flips.begin(), d.flips.end(),
                                           [&](const Flip& f) { return state.coord_of(f.cell).col == first.col; });
    horizontal += single_column ? 0 : 1;
  }
  // Fair coin: 2000 expected, sd ~32.
  CHECK(horizontal > 1800);
  CHECK(horizontal < 2200);
}

TEST_CASE("box geometry") {
  auto state = fresh(200, 200);
  CHECK(region_delta(state, {0, 0}, {3, 3}).flips.size() == 9);
  CHECK(region_delta(state, {199, 199}, {3, 3}).flips.size() == 1);

  const auto first = region_delta(state, {5, 5}, {3, 3});
  state.apply(first.flips);
  const auto second = region_delta(state, {6, 6}, {3, 3});
  std::set<std::size_t> all = cells_of(first);
  const auto more = cells_of(second);
  all.insert(more.begin(), more.end());
  CHECK(all.size() == 14);
  CHECK(second.flips.size() == 5);  // overlap already in T
}

TEST_CASE("toggle mode flips T cells back to S") {
  auto state = fresh(10, 10);
  state.apply(region_delta(state, {0, 0}, {3, 3}).flips);
  const auto d = region_delta(state, {1, 1}, {3, 3}, GeometricMode::Toggle);
  CHECK(d.flips.size() == 9);
  CHECK(d.t_to_s() == 4);
  CHECK(d.s_to_t() == 5);
}

TEST_CASE("fit anchors keep regions inside the image") {
  auto state = fresh(10, 8);
  Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    const auto anchor = draw_anchor(state, {3, 3}, AnchorMode::Fit, rng);
    REQUIRE(anchor.row <= 5);
    REQUIRE(anchor.col <= 7);
    CHECK(box_mutation(state, 3, rng, GeometricMode::Toggle, AnchorMode::Fit).flips.size() == 9);
  }
  // A region larger than the image anchors at the origin.
  CHECK(draw_anchor(state, {1, 180}, AnchorMode::Fit, rng).row == 0);
}

TEST_CASE("property: geometric regions stay in bounds down to 1x1") {
  Rng rng(31);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t w = 1 + rng.uniform_below(12);
    const std::size_t h = 1 + rng.uniform_below(12);
    auto state = fresh(w, h, trial);
    const Extent extent{1 + rng.uniform_below(15), 1 + rng.uniform_below(15)};
    const PixelCoord anchor{rng.uniform_below(h), rng.uniform_below(w)};
    const auto d = region_delta(state, anchor, extent);
    const std::size_t rows = std::min(h, anchor.row + extent.height) - anchor.row;
    const std::size_t cols = std::min(w, anchor.col + extent.width) - anchor.col;
    REQUIRE(d.flips.size() == rows * cols);
    for (const Flip& f : d.flips) {
      const auto c = state.coord_of(f.cell);
      REQUIRE(c.row >= anchor.row);
      REQUIRE(c.row < anchor.row + rows);
      REQUIRE(c.col >= anchor.col);
      REQUIRE(c.col < anchor.col + cols);
    }
    for (int k = 0; k < 5; ++k) {
      for (const auto& p : {strip_mutation(state, 180, rng), box_mutation(state, 3, rng),
                            combined_strip_mutation(state, {200, 40}, {1, 200}, rng)}) {
        for (const Flip& f : p.flips) REQUIRE(f.cell < w * h);
      }
    }
  }
}

TEST_CASE("property: proposals only touch mutable cells and inverse restores the state") {
  const auto pair = fixtures::all_differing(24, 18, 3);
  Raster target = pair.target;
  for (std::size_t i = 0; i < target.size(); i += 5) target[i] = pair.start[i];
  auto state = TransitionState::build(pair.start, target);
  Rng rng(41);
  OperatorSpec spec;
  spec.c_s = 6;
  spec.c_t = 3;
  spec.strip_length = 9;
  spec.h_strip = {10, 4};
  spec.v_strip = {1, 12};
  for (OperatorKind kind : {OperatorKind::Standard, OperatorKind::Asymmetric, OperatorKind::Strip,
                            OperatorKind::CombinedStrip, OperatorKind::Box, OperatorKind::Composite}) {
    spec.kind = kind;
    for (GeometricMode mode : {GeometricMode::SetToTarget, GeometricMode::Toggle}) {
      spec.geometric_mode = mode;
      for (std::uint64_t g = 0; g < 200; ++g) {
        const auto d = propose(state, spec, g, rng);
        std::vector<CellState> before;
        for (std::size_t c = 0; c < state.cell_count(); ++c) before.push_back(state.at(c));
        for (const Flip& f : d.flips) REQUIRE(state.at(f.cell) != CellState::Fixed);
        state.apply(d.flips);
        const auto inv = inverse(d);
        state.apply(inv.flips);
        for (std::size_t c = 0; c < state.cell_count(); ++c) REQUIRE(state.at(c) == before[c]);
        REQUIRE(state.recount_matches());
        if (g % 2 == 0) state.apply(d.flips);
      }
    }
  }
}

TEST_CASE("composite schedule") {
  for (std::uint64_t g = 0; g < 10; ++g) {
    CHECK(composite_next(g, OperatorKind::Strip, {1, 1}) ==
          (g % 2 == 0 ? OperatorKind::Asymmetric : OperatorKind::Strip));
  }
  const OperatorKind expected[] = {OperatorKind::Asymmetric, OperatorKind::Asymmetric, OperatorKind::Asymmetric,
                                   OperatorKind::Box};
  for (std::uint64_t g = 0; g < 12; ++g) CHECK(composite_next(g, OperatorKind::Box, {3, 1}) == expected[g % 4]);
  CHECK(composite_next(7, OperatorKind::Box, {1, 1}) == OperatorKind::Box);

  auto state = fresh(20, 20);
  OperatorSpec spec;
  spec.kind = OperatorKind::Composite;
  spec.composite_partner = OperatorKind::CombinedStrip;
  Rng rng(2);
  CHECK(propose(state, spec, 0, rng).proposal_kind == OperatorKind::Asymmetric);
  CHECK(propose(state, spec, 1, rng).proposal_kind == OperatorKind::CombinedStrip);
}

TEST_CASE("operator names round-trip") {
  for (OperatorKind k : {OperatorKind::Standard, OperatorKind::Asymmetric, OperatorKind::Strip,
                         OperatorKind::CombinedStrip, OperatorKind::Box, OperatorKind::Composite}) {
    CHECK(operator_kind_from_string(to_string(k)) == k);
  }
  CHECK(!operator_kind_from_string("blur"));
}
