#include "doctest.h"

#include <sstream>

#include "chyp/io.hpp"
#include "support.hpp"

using namespace chyp;
using namespace chyp::testing;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_group(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("group files: accepted forms") {
  const GroupSpec g = parse_group(R"({"n": 2, "generators": [
      {"type": "heis", "xi": [[1, 0]], "v": 0},
      {"type": "heis", "A": [[[0, 1]]], "xi": [2], "v": 2},
      {"type": "heis", "A": [[0, 1]], "xi": [[0, -1]]}],
      "labels": ["a", "b", "c"]})");
  REQUIRE(g.generators.size() == 3);
  CHECK(g.generators[0].label == "a");
  CHECK(g.generators[0].heis().A(0, 0) == cplx(1, 0));
  CHECK(g.generators[1].heis().A(0, 0) == cplx(0, 1));
  CHECK(g.generators[1].heis().tau.xi(0) == cplx(2, 0));
  CHECK(g.generators[1].heis().tau.v == 2.0);
  CHECK(g.generators[2].heis().A(0, 0) == cplx(0, 1));  // flat single entry
  CHECK(g.generators[2].heis().tau.v == 0.0);

  const double c = std::cosh(1.0), s = std::sinh(1.0);
  std::ostringstream flat, nested;
  flat.precision(17);
  nested.precision(17);
  flat << R"({"n": 2, "generators": [{"type": "matrix", "entries": [1,0,0, 0,)" << c << ',' << s << ",0," << s
       << ',' << c << "]}]}";
  nested << R"({"n": 2, "generators": [{"type": "matrix", "entries": [[1,0,0],[0,)" << c << ',' << s << "],[0,"
         << s << ',' << c << "]]}]}";
  const GroupSpec a = parse_group(flat.str()), b = parse_group(nested.str());
  CHECK(max_abs(a.generators[0].matrix() - b.generators[0].matrix()) == 0.0);
  CHECK(a.generators[0].label == "g1");
  CHECK(classify(a.isometries()[0]) == IsometryType::Loxodromic);
}

TEST_CASE("group files: round trip") {
  Rng rng(81);
  for (int n : {2, 3}) {
    GroupSpec g = GroupSpec::from_heis({random_heis_isometry(rng, n)}, {"x"});
    g.generators.push_back({CMat(random_j_unitary(rng, n)), "y"});
    const GroupSpec h = parse_group(group_to_json(g));
    REQUIRE(h.generators.size() == 2);
    CHECK(h.n == n);
    CHECK(h.generators[1].label == "y");
    CHECK(h.generators[0].is_heis());
    CHECK(max_abs(h.generators[0].matrix() - g.generators[0].matrix()) <= 1e-15);
    CHECK(max_abs(h.generators[1].matrix() - g.generators[1].matrix()) <= 1e-15);
  }
}

TEST_CASE("group files: errors name the field") {
  CHECK(error_of("{").find("group file") != std::string::npos);
  CHECK(error_of(R"({"generators": []})").find("/n") != std::string::npos);
  CHECK(error_of(R"({"n": 2, "generators": []})").find("/generators") != std::string::npos);
  CHECK(error_of(R"({"n": 2, "generators": [{"type": "heis", "xi": ["a"]}]})").find("/generators/0/xi/0") !=
        std::string::npos);
  CHECK(error_of(R"({"n": 2, "generators": [{"type": "heis", "xi": [1, 2]}]})").find("/generators/0/xi") !=
        std::string::npos);
  CHECK(error_of(R"({"n": 2, "generators": [{"type": "spin", "xi": [1]}]})").find("/generators/0/type") !=
        std::string::npos);
  CHECK(error_of(R"({"n": 2, "generators": [{"type": "heis", "xi": [1]}], "labels": [1, 2]})")
            .find("/labels") != std::string::npos);
  CHECK_THROWS_AS(parse_group(R"({"n": 2, "generators": [{"type": "heis", "A": [2], "xi": [1]}]})"),
                  NumericError);
  CHECK_THROWS_AS(parse_group(R"({"n": 2, "generators": [{"type": "matrix", "entries": [1,0,0,0,2,0,0,0,1]}]})"),
                  NumericError);
  CHECK_THROWS_AS(load_group("/nonexistent/group.json"), ValidationError);
}

TEST_CASE("point tables") {
  const PointTable t = parse_points_csv(
      "# comment\n"
      "xi_re_1, xi_im_1, v, f_xi_re_1, f_xi_im_1, f_v\n"
      "1, 2, 3, 0, 0, inf\n"
      "\n"
      "-0.5, 0, 1e-3, 4, 5, 6\n");
  CHECK(t.n == 2);
  REQUIRE(t.points.size() == 2);
  CHECK(t.points[0].xi()(0) == cplx(1, 2));
  CHECK(t.images[0].is_infinity());
  CHECK(t.points[1].v() == 1e-3);
  CHECK(t.pairs().size() == 2);

  const PointTable plain = parse_points_csv("xi_re_1,xi_re_2,xi_im_1,xi_im_2,v\n1,2,3,4,5\n");
  CHECK(plain.n == 3);
  CHECK(plain.points[0].xi()(1) == cplx(2, 4));
  CHECK(plain.images.empty());
  CHECK_THROWS_AS(plain.pairs(), ValidationError);

  auto message = [](const std::string& text) {
    try {
      parse_points_csv(text);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("xi_re_1,xi_im_1,v\n1,2,x\n").find("line 2, column v") != std::string::npos);
  CHECK(message("xi_re_1,xi_im_1,v\n1,2\n").find("line 2") != std::string::npos);
  CHECK(message("xi_re_1,v\n").find("xi_im_1") != std::string::npos);
  CHECK(message("a,b\n").find("xi_re_1") != std::string::npos);
  CHECK(message("").find("empty") != std::string::npos);
  CHECK(message("xi_re_1,xi_im_1,v,f_xi_re_1\n").find("f_xi_im_1") != std::string::npos);
}

TEST_CASE("point tables: round trip at full precision") {
  Rng rng(82);
  std::vector<HPoint> pts, imgs;
  for (int i = 0; i < 25; ++i) {
    pts.push_back(random_boundary(rng, 3));
    imgs.push_back(i == 7 ? HPoint::infinity(3) : random_boundary(rng, 3));
  }
  std::ostringstream os;
  write_points_csv(os, pts, imgs);
  const PointTable t = parse_points_csv(os.str());
  REQUIRE(t.points.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(same_point(t.points[i], pts[i], 0.0));
    CHECK(same_point(t.images[i], imgs[i], 0.0));
  }
}

TEST_CASE("number formatting") {
  CHECK(fmt(0.1) == "0.10000000000000001");
  CHECK(fmt(2.0) == "2");
  CHECK(fmt(-1.0 / 0.0) == "-inf");
  CHECK(std::stod(fmt(M_PI)) == M_PI);
  std::ostringstream os;
  write_summary(os, {{"a", "1"}, {"b", "x"}});
  write_csv_row(os, {"p", "q"});
  CHECK(os.str() == "# a=1\n# b=x\np,q\n");
  CHECK(point_columns("y_", 2) == std::vector<std::string>{"y_xi_re_1", "y_xi_im_1", "y_v", "y_u"});
  CHECK(point_cells(HPoint::infinity(2)) == std::vector<std::string>(4, "inf"));
}
