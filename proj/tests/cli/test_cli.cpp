#include <gtest/gtest.h>

#include <cstdlib>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "typeb/clt.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "typeb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = typeb::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

// CSV lines that are neither comments nor the header.
std::vector<std::vector<std::string>> data_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  bool header = true;
  for (const auto& line : lines(text)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string header_of(const std::string& text) {
  for (const auto& line : lines(text)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  return {};
}

nlohmann::json detail_of(const std::string& text) {
  for (const auto& line : lines(text)) {
    if (line.rfind("detail: ", 0) == 0) return nlohmann::json::parse(line.substr(8));
  }
  return {};
}

}  // namespace

TEST(Moments, QFamilySymbolic) {
  const Result r = run({"moments", "--family", "q", "--order", "6", "--symbolic"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(header_of(r.out), "e1,e2,coeff");
  const std::vector<std::vector<std::string>> expect = {
      {"0", "", "5"}, {"1", "", "6"}, {"2", "", "3"}, {"3", "", "1"}};
  EXPECT_EQ(data_rows(r.out), expect);
}

TEST(Moments, TypeBSymbolic) {
  const Result r = run({"moments", "--family", "typeB", "--order", "2", "--symbolic"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::vector<std::string>> expect = {{"0", "0", "1"}, {"0", "1", "1"}};
  EXPECT_EQ(data_rows(r.out), expect);
  EXPECT_NE(r.out.find("# labels: q,rho"), std::string::npos);
}

TEST(Moments, Numeric) {
  Result r = run({"moments", "--family", "qt", "--order", "4", "--q", "0", "--t", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(data_rows(r.out).size(), 1u);
  EXPECT_EQ(std::stod(data_rows(r.out)[0].back()), 1.0);

  r = run({"moments", "--family", "typeB", "--order", "4", "--q", "0.5", "--rho", "0.3",
           "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 3.9325, 1e-14);
  EXPECT_EQ(j["manifest"]["subcommand"], "moments");
  EXPECT_EQ(j["manifest"]["parameters"]["order"], 4);
}

TEST(Moments, SymbolicJson) {
  const Result r = run({"moments", "--family", "q", "--order", "4", "--symbolic", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.contains("terms"));
  EXPECT_EQ(j["terms"].size(), 2u);
}

TEST(Clt, SecondMomentIsExact) {
  const Result r = run({"clt", "--k", "2", "--q", "0.5", "--rho", "0.3", "--Ns", "3,40", "--seeds", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(header_of(r.out), "seed,N,moment,limit,abs_error,expected_moment");
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& row : rows) EXPECT_EQ(std::stod(row[4]), 0.0);
  // Seed major, N minor.
  EXPECT_EQ(rows[0][0], "1");
  EXPECT_EQ(rows[1][1], "40");
  EXPECT_EQ(rows[2][0], "2");
}

TEST(Clt, ExpectationColumnIsSeedFree) {
  const Result r = run({"clt", "--k", "4", "--q", "0.5", "--rho", "0.3", "--Ns", "10,100", "--seeds",
                        "3", "--exact-expectation"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& row : rows) {
    const int N = std::stoi(row[1]);
    EXPECT_NEAR(std::stod(row[5]), typeb::expected_moment(N, 4, 0.5, 0.3), 1e-13);
  }
  EXPECT_EQ(rows[0][5], rows[2][5]);
  EXPECT_EQ(rows[1][5], rows[5][5]);
}

TEST(Clt, DeterministicAcrossRunsAndThreads) {
  const std::vector<std::string> args = {"clt", "--k", "6", "--q", "0.3", "--rho", "-0.2",
                                         "--Ns", "4,9", "--seeds", "4", "--seed-base", "11"};
  const Result a = run(args);
  ::setenv("TYPEB_THREADS", "3", 1);
  const Result b = run(args);
  ::unsetenv("TYPEB_THREADS");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(data_rows(a.out), data_rows(b.out));
  EXPECT_EQ(data_rows(a.out)[0][0], "11");
  const std::string manifest = lines(a.out)[0];
  EXPECT_EQ(manifest.rfind("# manifest: ", 0), 0u);
  const auto m = nlohmann::json::parse(manifest.substr(12));
  EXPECT_EQ(m["seeds"], nlohmann::json({11, 12, 13, 14}));
}

TEST(Clt, CapacityRefusalIsMarkedPerRow) {
  const Result r = run({"clt", "--k", "8", "--q", "0.5", "--rho", "0.3", "--Ns", "2,100000", "--seeds", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][2].find("SKIPPED"), std::string::npos);
  EXPECT_EQ(rows[1][2].rfind("SKIPPED(", 0), 0u);
}

TEST(Check, Psd) {
  const Result r = run({"check", "psd", "--n", "2", "--d", "2", "--alpha", "0.5", "--q", "0.5"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("min_eigenvalue="), std::string::npos);
  const auto d = detail_of(r.out);
  EXPECT_TRUE(d["pass"].get<bool>());
  EXPECT_GT(d["results"][0]["detail"]["min_eigenvalue"].get<double>(), 0.0);
}

TEST(Check, Fock) {
  const Result r = run({"check", "fock", "--alpha", "0.6", "--q", "0.3", "--d", "2", "--M", "5",
                        "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  bool seen = false;
  for (const auto& row : j["results"]) {
    if (row["name"] == "commutation") {
      seen = true;
      EXPECT_LE(row["detail"]["max_residual"].get<double>(), 1e-10);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Check, Hypotheses) {
  Result r = run({"check", "hypotheses", "--rho", "0.4", "--seed", "7", "--nmax", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  for (const char* h : {"H1", "H2", "H3", "H4", "H5"}) {
    EXPECT_NE(r.out.find(std::string(h) + "     PASS"), std::string::npos) << h;
  }
  r = run({"check", "hypotheses", "--rho", "0.4", "--seed", "7", "--nmax", "3", "--r-convention",
           "ordered"});
  EXPECT_EQ(r.code, typeb::cli::kCheckFailed);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(ExitCodes, BadFlagsAndCapacity) {
  EXPECT_EQ(run({}).code, typeb::cli::kBadFlags);
  EXPECT_EQ(run({"frobnicate"}).code, typeb::cli::kBadFlags);
  EXPECT_EQ(run({"moments", "--family", "nope", "--order", "4"}).code, typeb::cli::kBadFlags);
  EXPECT_EQ(run({"moments", "--family", "q"}).code, typeb::cli::kBadFlags);
  EXPECT_EQ(run({"moments", "--family", "q", "--order", "4", "--rho", "0.2"}).code,
            typeb::cli::kBadFlags);
  EXPECT_EQ(run({"moments", "--family", "typeB", "--order", "4", "--q", "1.5"}).code,
            typeb::cli::kBadFlags);
  EXPECT_EQ(run({"clt", "--k", "4", "--q", "0.5", "--rho", "0.3", "--Ns", "x"}).code,
            typeb::cli::kBadFlags);
  EXPECT_EQ(run({"check", "psd", "--n", "2", "--d", "2", "--alpha", "0.5", "--q", "0.5", "--pi0",
                 "weird"})
                .code,
            typeb::cli::kBadFlags);
  const Result big = run({"moments", "--family", "typeB", "--order", "40", "--symbolic"});
  EXPECT_EQ(big.code, typeb::cli::kCapacity);
  EXPECT_FALSE(big.err.empty());
}
