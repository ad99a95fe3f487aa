#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "helpers/testutil.hpp"
#include "wartem/series.hpp"

#ifndef WARTEM_CLI_BIN
#error "WARTEM_CLI_BIN must point at the built CLI"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(WARTEM_CLI_BIN) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) result.output += buffer;
  const int status = ::pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

// a small dataset whose text rendering matches the writer's exactly
std::string make_input_tsv() {
  const auto path = testutil::temp_path("cli_input.tsv");
  testutil::write_file(path,
                       "0\t0.5\t1\t2.25\t-3\t0.125\t4\t1.5\t0\n"
                       "1\t1\t0.5\t-0.25\t2\t0.75\t-1\t3\t0.5\n"
                       "0\t0.25\t1.5\t2\t-2\t0.5\t3\t1\t0.25\n"
                       "1\t2\t0.25\t-0.5\t1\t0.125\t-2\t2.5\t1\n"
                       "0\t0.75\t1.25\t2.5\t-1\t0.25\t3.5\t0.5\t0\n"
                       "1\t1.5\t0.75\t-1\t1.5\t0.5\t-0.5\t2\t0.75\n"
                       "0\t0.5\t1\t2\t-2.5\t0.375\t3\t1.25\t0.125\n"
                       "1\t1.25\t0.5\t-0.75\t1.75\t0.625\t-1.5\t2.25\t0.5\n");
  return path;
}

std::string make_train_config(const std::string& extra = "seed = 1\n") {
  const auto path = testutil::temp_path("cli_train.cfg");
  testutil::write_file(path,
                       "max_epochs = 2\n"
                       "patience = 2\n"
                       "batch_size = 4\n"
                       "holdout_fraction = 0.25\n"
                       "conv_blocks = 2x3\n"
                       "code_length = 2\n" +
                           extra);
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("warp with count 0 reproduces the input bit-exactly") {
  const auto input = make_input_tsv();
  const auto output = testutil::temp_path("warp0.tsv");
  const RunResult r =
      run_cli("warp -i " + input + " -o " + output + " --count 0 --direction left --family copy");
  REQUIRE(r.exit_code == 0);
  CHECK(testutil::read_file(output) == testutil::read_file(input));
  CHECK(std::filesystem::exists(output + ".prov"));
}

TEST_CASE("warp is deterministic and preserves arity") {
  const auto input = make_input_tsv();
  const auto out_a = testutil::temp_path("warp_a.tsv");
  const auto out_b = testutil::temp_path("warp_b.tsv");
  REQUIRE(run_cli("warp -i " + input + " -o " + out_a + " --seed 5 --family mixed --direction right")
              .exit_code == 0);
  REQUIRE(run_cli("warp -i " + input + " -o " + out_b + " --seed 5 --family mixed --direction right")
              .exit_code == 0);
  CHECK(testutil::read_file(out_a) == testutil::read_file(out_b));

  const wartem::LabeledDataset warped = wartem::load_ucr_tsv(out_a);
  const wartem::LabeledDataset original = wartem::load_ucr_tsv(input);
  CHECK(warped.length == original.length);
  CHECK(warped.size() == original.size());
  CHECK(warped.labels == original.labels);
}

TEST_CASE("train requires an explicit seed") {
  const auto input = make_input_tsv();
  const auto config = testutil::temp_path("noseed.cfg");
  testutil::write_file(config, "max_epochs = 1\n");
  const auto model = testutil::temp_path("noseed.wartem");
  const RunResult r = run_cli("train -i " + input + " -c " + config + " -o " + model);
  CHECK(r.exit_code != 0);
  CHECK(r.output.find("'seed'") != std::string::npos);
}

TEST_CASE("train rejects unknown config keys") {
  const auto input = make_input_tsv();
  const auto config = make_train_config("seed = 1\nnot_a_real_key = 1\n");
  const auto model = testutil::temp_path("unknown.wartem");
  const RunResult r = run_cli("train -i " + input + " -c " + config + " -o " + model);
  CHECK(r.exit_code != 0);
  CHECK(r.output.find("not_a_real_key") != std::string::npos);
}

TEST_CASE("train writes seed-suffixed checkpoints, histories, and provenance") {
  const auto input = make_input_tsv();
  const auto config = make_train_config("seeds = 1,2\n");
  const auto model = testutil::temp_path("multi.wartem");
  const RunResult r = run_cli("train -i " + input + " -c " + config + " -o " + model);
  REQUIRE(r.exit_code == 0);

  const auto seed1 = model.substr(0, model.size() - 7) + "_seed1.wartem";
  const auto seed2 = model.substr(0, model.size() - 7) + "_seed2.wartem";
  CHECK(std::filesystem::exists(seed1));
  CHECK(std::filesystem::exists(seed2));
  CHECK(std::filesystem::exists(seed1.substr(0, seed1.size() - 7) + "_history.csv"));
  CHECK(std::filesystem::exists(model + ".prov"));

  const std::string prov = testutil::read_file(model + ".prov");
  CHECK(prov.find("command = train") != std::string::npos);
  CHECK(prov.find("seeds = 1,2") != std::string::npos);
  CHECK(prov.find("version = ") != std::string::npos);
  CHECK(prov.find("config_hash = ") != std::string::npos);
  CHECK(prov.find("learning_rate = ") != std::string::npos);  // defaulted keys echoed
}

TEST_CASE("training runs are replayable bit for bit") {
  const auto input = make_input_tsv();
  const auto config = make_train_config();
  const auto model_a = testutil::temp_path("replay_a.wartem");
  const auto model_b = testutil::temp_path("replay_b.wartem");
  REQUIRE(run_cli("train -i " + input + " -c " + config + " -o " + model_a).exit_code == 0);
  REQUIRE(run_cli("train -i " + input + " -c " + config + " -o " + model_b).exit_code == 0);
  CHECK(testutil::read_file(model_a) == testutil::read_file(model_b));
}

TEST_CASE("embed writes one labeled row per series") {
  const auto input = make_input_tsv();
  const auto config = make_train_config();
  const auto model = testutil::temp_path("embed.wartem");
  REQUIRE(run_cli("train -i " + input + " -c " + config + " -o " + model).exit_code == 0);

  const auto out_a = testutil::temp_path("embed_a.csv");
  const auto out_b = testutil::temp_path("embed_b.csv");
  REQUIRE(run_cli("embed -m " + model + " -i " + input + " -o " + out_a).exit_code == 0);
  REQUIRE(run_cli("embed -m " + model + " -i " + input + " -o " + out_b).exit_code == 0);
  CHECK(testutil::read_file(out_a) == testutil::read_file(out_b));

  const std::string text = testutil::read_file(out_a);
  CHECK(std::count(text.begin(), text.end(), '\n') == 8);
  const std::size_t first_line_end = text.find('\n');
  const std::string first_line = text.substr(0, first_line_end);
  // label plus code_length = 2 values
  CHECK(std::count(first_line.begin(), first_line.end(), ',') == 2);
}

TEST_CASE("embed writes one file per model") {
  const auto input = make_input_tsv();
  const auto config_a = make_train_config("seed = 3\n");
  const auto config_b = make_train_config("seed = 4\n");
  const auto model_a = testutil::temp_path("pair_a.wartem");
  const auto model_b = testutil::temp_path("pair_b.wartem");
  REQUIRE(run_cli("train -i " + input + " -c " + config_a + " -o " + model_a).exit_code == 0);
  REQUIRE(run_cli("train -i " + input + " -c " + config_b + " -o " + model_b).exit_code == 0);

  const auto output = testutil::temp_path("codes.csv");
  const RunResult r =
      run_cli("embed -m " + model_a + " -m " + model_b + " -i " + input + " -o " + output);
  REQUIRE(r.exit_code == 0);
  const auto stem = output.substr(0, output.size() - 4);
  CHECK(std::filesystem::exists(stem + "_m0.csv"));
  CHECK(std::filesystem::exists(stem + "_m1.csv"));
  CHECK(testutil::read_file(stem + "_m0.csv") != testutil::read_file(stem + "_m1.csv"));
}

TEST_CASE("eval baselines agree on a duplicate-free self test") {
  const auto input = make_input_tsv();
  const auto report = testutil::temp_path("report.csv");
  const RunResult eucl =
      run_cli("eval --mode eucl-nn --train " + input + " --test " + input + " --report " + report +
              " --dataset toy");
  REQUIRE(eucl.exit_code == 0);
  CHECK(eucl.output.find("100.00") != std::string::npos);

  const RunResult dtw = run_cli("eval --mode dtw-nn --train " + input + " --test " + input +
                                " --report " + report + " --dataset toy");
  REQUIRE(dtw.exit_code == 0);
  CHECK(dtw.output.find("100.00") != std::string::npos);

  const std::string csv = testutil::read_file(report);
  CHECK(csv.find("eucl-nn") != std::string::npos);
  CHECK(csv.find("dtw-nn") != std::string::npos);
  CHECK(std::filesystem::exists(report + ".prov"));
  CHECK(std::filesystem::exists(report + ".per_seed.csv"));
}

TEST_CASE("wartem modes demand at least one model") {
  const auto input = make_input_tsv();
  const auto report = testutil::temp_path("nomodel.csv");
  const RunResult r = run_cli("eval --mode wartem-nn --train " + input + " --test " + input +
                              " --report " + report);
  CHECK(r.exit_code != 0);
  CHECK(r.output.find("--model") != std::string::npos);
}

TEST_CASE("unknown eval modes are usage errors") {
  const auto input = make_input_tsv();
  const auto report = testutil::temp_path("badmode.csv");
  const RunResult r = run_cli("eval --mode nonsense --train " + input + " --test " + input +
                              " --report " + report);
  CHECK(r.exit_code != 0);
  CHECK(r.output.find("unknown eval mode") != std::string::npos);
}

TEST_CASE("wartem-nn end to end through the CLI") {
  const auto input = make_input_tsv();
  const auto config = make_train_config();
  const auto model = testutil::temp_path("e2e.wartem");
  REQUIRE(run_cli("train -i " + input + " -c " + config + " -o " + model).exit_code == 0);

  const auto report = testutil::temp_path("e2e_report.csv");
  const RunResult r = run_cli("eval --mode wartem-nn --train " + input + " --test " + input +
                              " --report " + report + " -m " + model + " --dataset toy");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("wartem-nn") != std::string::npos);
}

TEST_CASE("classifier modes through the CLI") {
  const auto input = make_input_tsv();
  const auto cfg = testutil::temp_path("eval.cfg");
  testutil::write_file(cfg, "trials = 2\nmax_epochs = 20\npatience = 5\n");
  const auto report = testutil::temp_path("dl_report.csv");

  const RunResult dl = run_cli("eval --mode dl --train " + input + " --test " + input +
                               " --report " + report + " --dataset toy -c " + cfg);
  REQUIRE(dl.exit_code == 0);
  CHECK(dl.output.find("toy dl:") != std::string::npos);

  const auto model = testutil::temp_path("dlmode.wartem");
  REQUIRE(run_cli("train -i " + input + " -c " + make_train_config() + " -o " + model).exit_code ==
          0);
  const RunResult wdl = run_cli("eval --mode wartem-dl --train " + input + " --test " + input +
                                " --report " + report + " --dataset toy -c " + cfg + " -m " + model);
  REQUIRE(wdl.exit_code == 0);

  const std::string csv = testutil::read_file(report);
  CHECK(csv.find("wartem-dl") != std::string::npos);
}

TEST_CASE("missing input files exit nonzero") {
  const RunResult r = run_cli("warp -i /nonexistent.tsv -o /tmp/out.tsv");
  CHECK(r.exit_code != 0);
  CHECK(r.output.find("error") != std::string::npos);
}

}  // TEST_SUITE
