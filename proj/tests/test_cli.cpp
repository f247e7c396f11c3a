#include <doctest.h>

#include <string>

#include "cli_support.hpp"
#include "ttc/io.hpp"
#include "ttc/metrics.hpp"

using namespace ttc;

namespace {

// Field `col` of CSV line `line` (0-based, header is line 0).
std::string field(const std::string& csv, std::size_t line, std::size_t col) {
  std::istringstream in(csv);
  std::string l;
  for (std::size_t i = 0; i <= line; ++i) std::getline(in, l);
  std::istringstream row(l);
  std::string f;
  for (std::size_t i = 0; i <= col; ++i) std::getline(row, f, ',');
  return f;
}

}  // namespace

TEST_CASE("complete: fully observed tensor converges with RSE 0") {
  const auto dir = cli::scratch("full");
  REQUIRE(cli::run(dir, "generate --dims 4,4,4 --ranks 2 --seed 1 --truth t.dtns --mask m.dmsk").status == 0);
  const cli::Result r = cli::run(dir, "complete --algo silrtc-tt --mask m.dmsk --truth t.dtns --out x.dtns");
  CHECK(r.status == 0);
  CHECK(field(r.out, 1, 1) == "0.0000000000e+00");
  CHECK(read_tensor(dir / "x.dtns") == read_tensor(dir / "t.dtns"));
}

TEST_CASE("complete: exit codes") {
  const auto dir = cli::scratch("codes");
  REQUIRE(cli::run(dir, "generate --dims 8,8,8,8 --ranks 3 --mr 0.8 --seed 2 --truth t.dtns --mask m.dmsk").status ==
          0);
  SUBCASE("unknown algorithm prints usage") {
    const cli::Result r = cli::run(dir, "complete --algo nope --mask m.dmsk");
    CHECK(r.status == 1);
    CHECK(r.err.find("unknown algorithm") != std::string::npos);
    CHECK(r.err.find("--algo") != std::string::npos);
  }
  SUBCASE("unknown flag fails fast") {
    const cli::Result r = cli::run(dir, "complete --algo tmac-tt --mask m.dmsk --ranks 3 --frobnicate");
    CHECK(r.status == 1);
    CHECK(r.err.find("frobnicate") != std::string::npos);
  }
  SUBCASE("maxiter without convergence") {
    const cli::Result r = cli::run(dir, "complete --algo silrtc-tt --mask m.dmsk --truth t.dtns --maxiter 1 --f 0.1");
    CHECK(r.status == 2);
    CHECK(field(r.out, 1, 4) == "0");
  }
  SUBCASE("factorization without ranks") {
    CHECK(cli::run(dir, "complete --algo tmac --mask m.dmsk").status == 1);
  }
  SUBCASE("bad file") {
    const cli::Result r = cli::run(dir, "complete --algo tmac --ranks 2 --mask t.dtns");
    CHECK(r.status == 1);
    CHECK(r.err.find("magic") != std::string::npos);
  }
  SUBCASE("no subcommand") { CHECK(cli::run(dir, "").status == 1); }
}

TEST_CASE("every subcommand documents its flags") {
  const auto dir = cli::scratch("help");
  const std::pair<const char*, const char*> subs[] = {
      {"complete", "--ranks"},          {"generate", "--truth"},       {"synth-experiment", "--trials"},
      {"image-experiment", "--max-rank"}, {"phase-diagram", "--epsilon"}, {"ka", "--in"},
      {"info", "--tensor"},             {"bench", "--iterations"}};
  for (auto [sub, flag] : subs) {
    const cli::Result r = cli::run(dir, std::string(sub) + " --help");
    CHECK(r.status == 0);
    CHECK(r.out.find(flag) != std::string::npos);
    CHECK(cli::run(dir, std::string(sub) + " --no-such-flag").status == 1);
  }
  const cli::Result top = cli::run(dir, "--help");
  CHECK(top.status == 0);
  CHECK(top.out.find("phase-diagram") != std::string::npos);
}

TEST_CASE("a one-cell sweep equals complete on the same seed") {
  const auto dir = cli::scratch("cross");
  const cli::Result sweep =
      cli::run(dir, "synth-experiment --dims 6,6,6,6 --ranks 2 --mr 0.5 --algo tmac-tt,silrtc-tt --seed 9 --maxiter 80");
  REQUIRE(sweep.status == 0);
  REQUIRE(cli::run(dir, "generate --dims 6,6,6,6 --ranks 2 --mr 0.5 --seed 9 --truth t.dtns --mask m.dmsk").status ==
          0);
  const cli::Result tmac =
      cli::run(dir, "complete --algo tmac-tt --ranks 2 --mask m.dmsk --truth t.dtns --seed 9 --maxiter 80");
  const cli::Result silrtc = cli::run(dir, "complete --algo silrtc-tt --mask m.dmsk --truth t.dtns --seed 9 --maxiter 80");
  // complete: algorithm,rse,iterations,epsilon,...  sweep: algorithm,mr,seed,rse,iterations,epsilon,...
  CHECK(field(tmac.out, 1, 1) == field(sweep.out, 1, 3));
  CHECK(field(tmac.out, 1, 2) == field(sweep.out, 1, 4));
  CHECK(field(tmac.out, 1, 3) == field(sweep.out, 1, 5));
  CHECK(field(silrtc.out, 1, 1) == field(sweep.out, 2, 3));
  CHECK(field(silrtc.out, 1, 6) == field(sweep.out, 2, 8));

  // The tensor path of complete draws the same mask from the same seed.
  const cli::Result direct =
      cli::run(dir, "complete --algo tmac-tt --ranks 2 --tensor t.dtns --mr 0.5 --seed 9 --maxiter 80");
  CHECK(field(direct.out, 1, 1) == field(sweep.out, 1, 3));
}

TEST_CASE("synth-experiment with mr 0 reports zero RSE") {
  const auto dir = cli::scratch("mr0");
  const cli::Result r = cli::run(dir, "synth-experiment --dims 5,5,5 --ranks 2 --mr 0 --algo all --out rows.csv");
  REQUIRE(r.status == 0);
  const std::string csv = cli::slurp(dir / "rows.csv");
  for (std::size_t line = 1; line <= 6; ++line) CHECK(field(csv, line, 3) == "0.0000000000e+00");
}

TEST_CASE("image paths") {
  const auto dir = cli::scratch("image");
  // A 16x16 crop-free test image built from the ka utility's inverse.
  DenseTensor img(Dims{16, 16, 3});
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<double>((i * 37) % 256) / 255.0;
  write_ppm(ImageBuffer{img}, dir / "in.ppm");
  SUBCASE("mr 0 returns the input") {
    REQUIRE(cli::run(dir, "complete --algo tmac-tt --image in.ppm --mr 0 --out out.ppm").status == 0);
    CHECK(cli::slurp(dir / "out.ppm") == cli::slurp(dir / "in.ppm"));
    REQUIRE(cli::run(dir, "complete --algo tmac-tt --image in.ppm --ka --mr 0 --out out_ka.ppm").status == 0);
    CHECK(cli::slurp(dir / "out_ka.ppm") == cli::slurp(dir / "in.ppm"));
  }
  SUBCASE("image-experiment writes one image per run") {
    const cli::Result r = cli::run(dir, "image-experiment --image in.ppm --mr 0.5 --maxiter 20 --out res");
    REQUIRE(r.status == 0);
    for (const char* f : {"results.csv", "observed.ppm", "recovered_tmac-tt.ppm", "recovered_tmac-tt_ka.ppm",
                          "recovered_tmac.ppm", "recovered_tmac_ka.ppm"}) {
      CHECK(std::filesystem::exists(dir / "res" / f));
    }
  }
  SUBCASE("KA shape violations exit 1") {
    write_ppm(ImageBuffer{DenseTensor(Dims{12, 12, 3})}, dir / "odd.ppm");
    CHECK(cli::run(dir, "image-experiment --image odd.ppm --ka ka --out res2").status == 1);
    CHECK(cli::run(dir, "ka forward --in odd.ppm --out x.dtns").status == 1);
  }
  SUBCASE("ka utility round trip") {
    REQUIRE(cli::run(dir, "ka forward --in in.ppm --out aug.dtns").status == 0);
    CHECK(read_tensor(dir / "aug.dtns").dims() == Dims{4, 4, 4, 4, 3});
    REQUIRE(cli::run(dir, "ka inverse --in aug.dtns --out back.ppm").status == 0);
    CHECK(cli::slurp(dir / "back.ppm") == cli::slurp(dir / "in.ppm"));
  }
}

TEST_CASE("info and phase-diagram") {
  const auto dir = cli::scratch("info");
  REQUIRE(cli::run(dir, "generate --dims 5,6,5 --ranks 2 --seed 3 --truth t.txt").status == 0);
  const cli::Result r = cli::run(dir, "info --tensor t.txt");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("tt_ranks,2,2") != std::string::npos);
  CHECK(r.out.find("dims,5,6,5") != std::string::npos);

  REQUIRE(cli::run(dir, "phase-diagram --dims 5,5,5 --rank-axis 1,2 --mr-axis 0,0.5 --maxiter 50 --out pd").status ==
          0);
  const std::string pgm = cli::slurp(dir / "pd.pgm");
  CHECK(pgm.rfind("P5\n2 2\n255\n", 0) == 0);
  CHECK(static_cast<unsigned char>(pgm[11]) == 255);
  CHECK(cli::slurp(dir / "pd.csv").rfind("rank,0,0.5\n", 0) == 0);
}
