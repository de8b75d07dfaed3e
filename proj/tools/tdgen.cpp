// tdgen: generate, render and score timing-diagram QA datasets.
//
// Exit codes: 0 ok, 1 domain error (reported as JSON on stderr), 2 usage
// error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdgen/bands.hpp"
#include "tdgen/dataset.hpp"
#include "tdgen/errors.hpp"
#include "tdgen/metrics.hpp"
#include "tdgen/pipeline.hpp"
#include "tdgen/reasoning.hpp"
#include "tdgen/svg.hpp"
#include "tdgen/textgen_http.hpp"
#include "tdgen/trace.hpp"
#include "tdgen/vcd.hpp"
#include "tdgen/verilog.hpp"
#include "tdgen/wavejson.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) tdgen::fail(tdgen::Errc::IoFailure, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) tdgen::fail(tdgen::Errc::IoFailure, "cannot write " + path);
  out << content;
}

tdgen::RunConfig config_for(const std::string& config_path) {
  return config_path.empty() ? tdgen::RunConfig{} : tdgen::load_run_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"timing-diagram dataset toolkit"};
  app.require_subcommand(1);

  // vcd2wave
  auto* vcd2wave = app.add_subcommand("vcd2wave", "convert a VCD file to WaveJSON");
  std::string v2w_in, v2w_clock, v2w_edge = "rising", v2w_out = "-";
  vcd2wave->add_option("input", v2w_in, "input .vcd file")->required();
  vcd2wave->add_option("--clock", v2w_clock, "clock signal name")->required();
  vcd2wave->add_option("--edge", v2w_edge, "sampling edge: rising|falling")
      ->check(CLI::IsMember({"rising", "falling"}));
  vcd2wave->add_option("-o,--output", v2w_out, "output JSON path (- for stdout)");

  // render
  auto* render = app.add_subcommand("render", "render WaveJSON to SVG");
  std::string r_in, r_out = "-";
  render->add_option("input", r_in, "input WaveJSON file")->required();
  render->add_option("-o,--output", r_out, "output SVG path (- for stdout)");

  // gen-testbench
  auto* gentb = app.add_subcommand("gen-testbench", "random-stimulus testbench for a module");
  std::string tb_in, tb_out = "-";
  std::uint64_t tb_seed = 1;
  std::size_t tb_cycles = 16;
  gentb->add_option("input", tb_in, "Verilog source with one module")->required();
  gentb->add_option("--cycles", tb_cycles, "stimulus cycles");
  gentb->add_option("--seed", tb_seed, "stimulus seed");
  gentb->add_option("-o,--output", tb_out, "output .v path (- for stdout)");

  // describe
  auto* describe = app.add_subcommand("describe", "query a text service about a module");
  std::string d_in, d_endpoint, d_out = "-";
  describe->add_option("input", d_in, "Verilog source with one module")->required();
  describe->add_option("--endpoint", d_endpoint, "text-service completion URL")->required();
  describe->add_option("-o,--output", d_out, "output JSON path (- for stdout)");

  // gen-caption
  auto* gencap = app.add_subcommand("gen-caption", "build the caption QA pool");
  std::string gc_config;
  std::size_t gc_count = 0;
  std::uint64_t gc_seed = 0;
  std::string gc_out;
  gencap->add_option("--config", gc_config, "run config JSON");
  gencap->add_option("--count", gc_count, "pool size (overrides config n_caption)");
  gencap->add_option("--seed", gc_seed, "overrides config seed");
  gencap->add_option("--out-dir", gc_out, "overrides config out_dir");

  // gen-reasoning
  auto* genrsn = app.add_subcommand("gen-reasoning", "instantiate reasoning templates");
  std::string gr_task = "serial_parity_stop", gr_scenario = "success", gr_out = "-";
  std::size_t gr_count = 1;
  std::uint64_t gr_seed = 1;
  genrsn->add_option("--task", gr_task, "task name");
  genrsn->add_option("--scenario", gr_scenario, "success|failure")
      ->check(CLI::IsMember({"success", "failure"}));
  genrsn->add_option("--count", gr_count, "number of QA pairs");
  genrsn->add_option("--seed", gr_seed, "base seed");
  genrsn->add_option("-o,--output", gr_out, "output JSONL path (- for stdout)");

  // package
  auto* package = app.add_subcommand("package", "run the full pipeline and export a dataset");
  std::string p_config;
  std::size_t p_parallelism = 0;
  package->add_option("--config", p_config, "run config JSON");
  package->add_option("--parallelism", p_parallelism, "worker count (overrides config)");

  // eval
  auto* eval = app.add_subcommand("eval", "score predictions against a packaged dataset");
  std::string e_pred, e_data, e_out;
  eval->add_option("--pred", e_pred, "predictions JSONL: {\"id\",\"prediction\"}")->required();
  eval->add_option("--data", e_data, "data.jsonl with reference answers")->required();
  eval->add_option("-o,--output", e_out, "also write the report JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  auto emit = [](const std::string& path, const std::string& content) {
    if (path == "-")
      std::cout << content;
    else
      write_file(path, content);
  };

  try {
    if (vcd2wave->parsed()) {
      tdgen::VcdDocument doc = tdgen::parse_vcd(read_file(v2w_in));
      tdgen::TimingDiagram td = tdgen::sample_to_diagram(
          doc, v2w_clock,
          v2w_edge == "rising" ? tdgen::ClockEdge::Rising : tdgen::ClockEdge::Falling);
      emit(v2w_out, tdgen::wave_to_json(tdgen::emit_wavejson(td)).dump(2) + "\n");
    } else if (render->parsed()) {
      tdgen::WaveDocument doc;
      try {
        doc = tdgen::wave_from_json(nlohmann::json::parse(read_file(r_in)));
      } catch (const nlohmann::json::exception& e) {
        tdgen::fail(tdgen::Errc::ParseFailure, e.what());
      }
      emit(r_out, tdgen::render_svg(doc));
    } else if (gentb->parsed()) {
      tdgen::ModuleInfo m = tdgen::parse_module_header(read_file(tb_in));
      emit(tb_out, tdgen::generate_testbench(m, tb_seed, tb_cycles));
    } else if (describe->parsed()) {
      tdgen::ModuleInfo m = tdgen::parse_module_header(read_file(d_in));
      tdgen::HttpTextService service(d_endpoint);
      tdgen::DescriptionBundle b = tdgen::describe_module(m, service);
      nlohmann::json j{{"module", m.name},
                       {"description", b.description},
                       {"caption", b.caption},
                       {"summary", b.summary},
                       {"use_cases", b.use_cases}};
      emit(d_out, j.dump(2) + "\n");
    } else if (gencap->parsed()) {
      tdgen::RunConfig cfg = config_for(gc_config);
      if (gencap->count("--seed")) cfg.seed = gc_seed;
      if (!gc_out.empty()) cfg.out_dir = gc_out;
      std::size_t count = gencap->count("--count") ? gc_count : cfg.n_caption;
      std::vector<tdgen::DatasetRecord> pool = tdgen::build_caption_pool(cfg, count);
      std::filesystem::create_directories(cfg.out_dir);
      std::ostringstream lines;
      for (const tdgen::DatasetRecord& r : pool)
        lines << tdgen::record_to_json(r).dump() << '\n';
      write_file(cfg.out_dir + "/caption_pool.jsonl", lines.str());
      std::cout << "wrote " << pool.size() << " caption pairs to " << cfg.out_dir
                << "/caption_pool.jsonl\n";
    } else if (genrsn->parsed()) {
      std::ostringstream lines;
      for (std::size_t i = 0; i < gr_count; ++i) {
        auto [td, ctx] = tdgen::generate_td(gr_task, tdgen::scenario_from_name(gr_scenario),
                                            gr_seed + i);
        std::vector<tdgen::ReasoningTemplate> templates = tdgen::template_registry(gr_task);
        tdgen::Rng rng = tdgen::Rng(gr_seed + i).split(tdgen::hash_str("cli-reasoning"));
        std::size_t start = static_cast<std::size_t>(rng.below(templates.size()));
        for (std::size_t k = 0; k < templates.size(); ++k) {
          try {
            tdgen::QaPair pair =
                tdgen::instantiate(templates[(start + k) % templates.size()], td, ctx);
            nlohmann::json j = tdgen::qa_to_json(pair);
            j.erase("grounding");
            lines << j.dump() << '\n';
            break;
          } catch (const tdgen::Error& e) {
            if (e.code() != tdgen::Errc::NotApplicable) throw;
          }
        }
      }
      emit(gr_out, lines.str());
    } else if (package->parsed()) {
      tdgen::RunConfig cfg = config_for(p_config);
      if (package->count("--parallelism")) cfg.parallelism = p_parallelism;
      tdgen::Manifest m = tdgen::run_package(cfg);
      std::cout << "packaged " << m.total << " records into " << cfg.out_dir << "\n";
    } else if (eval->parsed()) {
      std::vector<std::pair<std::string, std::string>> preds;
      std::map<std::string, std::string> refs;
      std::istringstream pred_in(read_file(e_pred)), data_in(read_file(e_data));
      std::string line;
      try {
        while (std::getline(pred_in, line)) {
          if (line.empty()) continue;
          nlohmann::json j = nlohmann::json::parse(line);
          preds.emplace_back(j.at("id").get<std::string>(),
                             j.at("prediction").get<std::string>());
        }
        while (std::getline(data_in, line)) {
          if (line.empty()) continue;
          nlohmann::json j = nlohmann::json::parse(line);
          refs[j.at("id").get<std::string>()] =
              j.at("conversations").at(1).at("value").get<std::string>();
        }
      } catch (const nlohmann::json::exception& e) {
        tdgen::fail(tdgen::Errc::ParseFailure, e.what());
      }
      tdgen::ScoreReport report = tdgen::evaluate_pairs(preds, refs);
      std::printf("pairs      %zu\n", report.pairs);
      std::printf("BLEU-4     %6.2f\n", report.bleu4);
      std::printf("ROUGE-1 F1 %6.2f (P %.2f / R %.2f)\n", report.rouge1.f1,
                  report.rouge1.precision, report.rouge1.recall);
      std::printf("ROUGE-2 F1 %6.2f (P %.2f / R %.2f)\n", report.rouge2.f1,
                  report.rouge2.precision, report.rouge2.recall);
      std::printf("ROUGE-L F1 %6.2f (P %.2f / R %.2f)\n", report.rougel.f1,
                  report.rougel.precision, report.rougel.recall);
      if (!e_out.empty())
        write_file(e_out, tdgen::score_report_to_json(report, true).dump(2) + "\n");
    }
  } catch (const tdgen::Error& e) {
    nlohmann::json err{{"error", tdgen::errc_name(e.code())}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", "internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
