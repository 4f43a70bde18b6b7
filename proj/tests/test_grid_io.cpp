#include <sstream>

#include "doctest.h"
#include "shm/grid_io.hpp"
#include "support.hpp"

using namespace shm;
using namespace shm::test;

namespace {

constexpr int N = 8;

bool identical(const ScalarField& a, const ScalarField& b) {
  if (a.terms().size() != b.terms().size() || a.twist() != b.twist()) return false;
  for (std::size_t t = 0; t < a.terms().size(); ++t)
    if (a.terms()[t].mask != b.terms()[t].mask || a.terms()[t].values != b.terms()[t].values) return false;
  return true;
}

ErrorCode read_error(const std::string& text, const GridPtr& g) {
  std::istringstream in(text);
  try {
    (void)read_grid_text(in, g);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("accepted malformed input");
  return ErrorCode::config_parse;
}

}  // namespace

TEST_CASE("grid files round trip exactly") {
  const auto g = unit_grid(8);
  const FieldContext ctx{g, N, 2};
  Rng r(71);
  const auto psi = make_psi(random_modes(r, FieldKind::psi, 4, {0, 1, 2}, 1, 0.7), ctx);
  const auto phi = make_map(random_modes(r, FieldKind::map, 2, {-1}, 2, 0.9), ctx);
  const std::vector<NamedField> fields{{"psi00", psi[0][0]}, {"psi11", psi[1][1]}, {"phi0", phi.phi[0]},
                                       {"zero", ScalarField(g, N)}};
  std::ostringstream out;
  write_grid_text(out, fields);
  std::istringstream in(out.str());
  const auto back = read_grid_text(in, g);
  REQUIRE(back.size() == fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    CHECK(back[i].name == fields[i].name);
    CHECK(identical(back[i].field, fields[i].field));
  }
  std::ostringstream again;
  write_grid_text(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("grid file layout") {
  const auto g = unit_grid(8);
  const auto f = ScalarField::monomial(g, N, 0b101, std::vector<double>(g->size(), 0.25));
  std::ostringstream out;
  write_grid_text(out, {{"f", f}});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# shm-grid 1");
  std::getline(in, line);
  CHECK(line == "# size 8 8 1 1");
  std::getline(in, line);
  CHECK(line == "# generators 8");
  std::getline(in, line);
  CHECK(line == "# field f 0 0");
  std::getline(in, line);
  CHECK(line == "# columns i j x1 x2 f[0,2]");
  std::getline(in, line);
  CHECK(line == "0 0 0 0 0.25");
  std::getline(in, line);
  CHECK(line == "0 1 0 0.125 0.25");
}

TEST_CASE("frames round trip") {
  const auto g = unit_grid(8);
  const auto frame = FrameField<ScalarField>::conformal(g, N, conformal_factor(g, 0.2));
  std::ostringstream out;
  write_frame_text(out, frame);
  std::istringstream in(out.str());
  const auto back = read_frame_text(in, g);
  for (int k = 0; k < 2; ++k)
    for (int mu = 0; mu < 2; ++mu) CHECK(identical(back.e[k][mu], frame.e[k][mu]));
}

TEST_CASE("malformed grid files are rejected") {
  const auto g = unit_grid(8);
  const auto f = ScalarField::monomial(g, N, 0b1, std::vector<double>(g->size(), 1.0));
  std::ostringstream out;
  write_grid_text(out, {{"f", f}});
  const std::string good = out.str();

  CHECK(read_error(good, unit_grid(16)) == ErrorCode::shape_mismatch);
  // Drop the last record.
  const std::string shortened = good.substr(0, good.rfind('\n', good.size() - 2) + 1);
  CHECK(read_error(shortened, g) == ErrorCode::config_parse);
  // Duplicate a record.
  const std::string dup = good + good.substr(good.rfind('\n', good.size() - 2) + 1);
  CHECK(read_error(dup, g) == ErrorCode::config_parse);
  std::string bad_label = good;
  bad_label.replace(bad_label.find("f[0]"), 4, "g[0]");
  CHECK(read_error(bad_label, g) == ErrorCode::config_parse);
  std::string bad_gen = good;
  bad_gen.replace(bad_gen.find("f[0]"), 4, "f[9]");
  CHECK(read_error(bad_gen, g) == ErrorCode::config_parse);
  std::string extra = good;
  extra.insert(extra.find("\n0 0 ") + 1, "0 0 0 0 1 2\n");
  CHECK(read_error(extra, g) == ErrorCode::config_parse);
  CHECK(read_error("0 0 0 0 1\n", g) == ErrorCode::config_parse);

  std::ostringstream frame_text;
  write_grid_text(frame_text, {{"e11", f}});
  std::istringstream in(frame_text.str());
  CHECK_THROWS_AS((void)read_frame_text(in, g), Error);
}
