#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <unistd.h>

// End-to-end checks of the command-line tool: exact output bytes,
// determinism, and the exit-code contract.

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  RunResult result;
  std::string command = std::string(QCA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string rule_path(const std::string& name) {
  return std::string(QCA_RULES_DIR) + "/" + name + ".json";
}

}  // namespace

TEST_CASE("analyze is deterministic and correct for xor") {
  RunResult a = run("analyze " + rule_path("xor"));
  RunResult b = run("analyze " + rule_path("xor"));
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"injective_finite\": true") != std::string::npos);
  CHECK(a.out.find("\"reversible\": false") != std::string::npos);
  CHECK(a.out.find("\"open\": true") != std::string::npos);
  CHECK(a.out.find("\"quantization_uniformly_local\": false") != std::string::npos);
  CHECK(a.out.find("\"quantization_everywhere_local\": true") != std::string::npos);

  RunResult oracle = run("analyze --oracle " + rule_path("xor"));
  CHECK(oracle.out.find("\"oracle_agreement\": true") != std::string::npos);
}

TEST_CASE("step reproduces the block image") {
  RunResult r = run("step " + rule_path("xor") + " \"0|111111111111\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"-1|1000000000001\"") != std::string::npos);

  RunResult zero = run("step --steps 0 " + rule_path("xor") + " \"0|101\"");
  CHECK(zero.out.find("\"0|101\"") != std::string::npos);
}

TEST_CASE("graph writes byte-identical dot files") {
  auto temp_path = [](const char* tag) {
    std::string templ = std::string("/tmp/qca_dot_") + tag + "_XXXXXX";
    int fd = mkstemp(templ.data());
    REQUIRE(fd >= 0);
    close(fd);
    return templ;
  };
  std::string dot1 = temp_path("a");
  std::string dot2 = temp_path("b");
  RunResult a = run("graph " + rule_path("xor") + " --dot " + dot1);
  RunResult b = run("graph " + rule_path("xor") + " --dot " + dot2);
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  auto slurp = [](const std::string& path) {
    FILE* f = fopen(path.c_str(), "rb");
    REQUIRE(f != nullptr);
    std::string content;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) content.append(buf.data(), n);
    fclose(f);
    std::remove(path.c_str());
    return content;
  };
  std::string c1 = slurp(dot1), c2 = slurp(dot2);
  CHECK(!c1.empty());
  CHECK(c1 == c2);
}

TEST_CASE("exit codes follow the contract") {
  // 2: input error.
  CHECK(run("analyze /nonexistent.json").exit_code == 2);
  // 5: falsifying a reversible rule is ruled out by theorem.
  CHECK(run("falsify " + rule_path("identity")).exit_code == 5);
  // 0 with a violated verdict is still a successful determination.
  CHECK(run("locality " + rule_path("xor") + " --region 0,1 --neighborhood 0").exit_code == 0);
}

TEST_CASE("falsify and signal emit the headline numbers") {
  RunResult f = run("falsify --radius 3 " + rule_path("xor"));
  CHECK(f.exit_code == 0);
  CHECK(f.out.find("\"evolved_trace_distance\": 1") != std::string::npos);
  CHECK(f.out.find("\"reduction_residual\": 0") != std::string::npos);

  RunResult s = run("signal --auto " + rule_path("xor"));
  CHECK(s.exit_code == 0);
  CHECK(s.out.find("\"success_probability\": 1") != std::string::npos);

  // Explicit setup with Alice far from the image difference: a coin flip.
  RunResult far = run("signal " + rule_path("xor") +
                      " --x \"0|\" --y \"0|111111111111\" --bob 5 --alice 20,21");
  CHECK(far.exit_code == 0);
  CHECK(far.out.find("\"success_probability\": 0.5") != std::string::npos);
}
