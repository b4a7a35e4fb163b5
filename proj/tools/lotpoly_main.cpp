// Command line front end: fuse, vectorize, clean, eval, synth, pipeline.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lotpoly/pipeline.hpp"
#include "lotpoly/synth.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  int jobs = 1;
  std::uint64_t seed = 7;
  bool print_config = false;
};

lotpoly::PipelineConfig effective_config(const CommonArgs& common) {
  lotpoly::PipelineConfig cfg;
  if (!common.config_path.empty()) {
    cfg = lotpoly::load_config(common.config_path);
  }
  return cfg;
}

int dispatch(CLI::App& app, const CommonArgs& common) {
  using namespace lotpoly;

  if (common.print_config) {
    std::cout << config_to_json(effective_config(common)).dump(2) << "\n";
    return 0;
  }

  if (CLI::App* cmd = app.get_subcommand("fuse"); cmd->parsed()) {
    std::vector<std::string> warnings;
    const FuseSummary s =
        run_fuse(cmd->get_option("--rgb-dir")->as<std::string>(),
                 cmd->get_option("--nir-dir")->as<std::string>(),
                 cmd->get_option("--out-dir")->as<std::string>(), common.jobs, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    for (const std::string& s2 : s.skipped) std::cerr << "skipped: " << s2 << "\n";
    std::cout << "fused " << s.fused_ids.size() << " tiles\n";
    return 0;
  }

  if (CLI::App* cmd = app.get_subcommand("vectorize"); cmd->parsed()) {
    std::vector<std::string> warnings;
    const bool no_dissolve = cmd->get_option("--no-dissolve")->as<bool>();
    run_vectorize(cmd->get_option("--pred-dir")->as<std::string>(),
                  cmd->get_option("--out")->as<std::string>(), !no_dissolve, common.jobs,
                  &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    return 0;
  }

  if (CLI::App* cmd = app.get_subcommand("clean"); cmd->parsed()) {
    PipelineConfig cfg = effective_config(common);
    if (cmd->get_option("--buildings")->count()) {
      cfg.buildings_path = cmd->get_option("--buildings")->as<std::string>();
    }
    if (cmd->get_option("--roads")->count()) {
      cfg.roads_path = cmd->get_option("--roads")->as<std::string>();
    }
    const CleanResult result =
        run_clean(cmd->get_option("--in")->as<std::string>(), cfg);
    write_polygons_geojson(result.cleaned.geo,
                           cmd->get_option("--out")->as<std::string>(),
                           result.cleaned.labels);
    RunReport report;
    report.config_echo = config_to_json(cfg);
    report.clean_audit = result.audit;
    report.warnings = result.warnings;
    if (cmd->get_option("--report")->count()) {
      write_report_json(report, cmd->get_option("--report")->as<std::string>());
    }
    std::cout << render_table(report);
    return 0;
  }

  if (CLI::App* cmd = app.get_subcommand("eval"); cmd->parsed()) {
    EvalInputs in;
    if (cmd->get_option("--pred-dir")->count()) {
      in.pred_mask_dir = cmd->get_option("--pred-dir")->as<std::string>();
    }
    if (cmd->get_option("--pred-geojson")->count()) {
      in.pred_geojson = cmd->get_option("--pred-geojson")->as<std::string>();
    }
    if (in.pred_mask_dir.empty() == in.pred_geojson.empty()) {
      throw ValidationError("eval needs exactly one of --pred-dir or --pred-geojson");
    }
    in.gt_mask_dir = cmd->get_option("--gt-dir")->as<std::string>();
    const RunReport report = run_eval(in, common.jobs);
    if (cmd->get_option("--report")->count()) {
      write_report_json(report, cmd->get_option("--report")->as<std::string>());
    }
    std::cout << render_table(report);
    return 0;
  }

  if (CLI::App* cmd = app.get_subcommand("synth"); cmd->parsed()) {
    SynthOptions opt;
    opt.seed = common.seed;
    opt.n_tiles = cmd->get_option("--n-tiles")->as<int>();
    opt.tile_px = cmd->get_option("--tile-px")->as<int>();
    const SynthSummary s =
        generate_fixtures(opt, cmd->get_option("--out-dir")->as<std::string>());
    std::printf("generated %zu tiles, mean gt coverage %.1f%%, %zu buildings, %zu roads\n",
                s.tile_ids.size(), 100.0 * s.mean_gt_coverage, s.building_count,
                s.road_count);
    return 0;
  }

  if (CLI::App* cmd = app.get_subcommand("pipeline"); cmd->parsed()) {
    PipelineConfig cfg = effective_config(common);
    if (cmd->get_option("--buildings")->count()) {
      cfg.buildings_path = cmd->get_option("--buildings")->as<std::string>();
    }
    if (cmd->get_option("--roads")->count()) {
      cfg.roads_path = cmd->get_option("--roads")->as<std::string>();
    }
    if (cmd->get_option("--no-dissolve")->as<bool>()) {
      cfg.dissolve = false;
    }
    const std::filesystem::path out_dir =
        cmd->get_option("--out-dir")->as<std::string>();
    std::filesystem::create_directories(out_dir);
    const PipelineResult result =
        run_pipeline(cmd->get_option("--pred-dir")->as<std::string>(),
                     cmd->get_option("--gt-dir")->as<std::string>(), cfg, common.jobs);
    write_polygons_geojson(result.cleaned.geo, out_dir / "cleaned.geojson",
                           result.cleaned.labels);
    write_report_json(result.report, out_dir / "report.json");
    std::cout << render_table(result.report);
    return 0;
  }

  std::cerr << app.help();
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parking lot mask post-processing and evaluation"};
  app.require_subcommand(0, 1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "JSON config file");
  app.add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "random seed (synth)");
  app.add_flag("--print-config", common.print_config,
               "print the effective config as JSON and exit");

  CLI::App* fuse = app.add_subcommand("fuse", "resample NIR tiles onto RGB tiles");
  fuse->add_option("--rgb-dir", "directory of 3-band RGB tiles")->required();
  fuse->add_option("--nir-dir", "directory of single-band NIR tiles")->required();
  fuse->add_option("--out-dir", "output directory for 4-band tiles")->required();

  CLI::App* vec = app.add_subcommand("vectorize", "mask tiles to GeoJSON polygons");
  vec->add_option("--pred-dir", "directory of prediction mask tiles")->required();
  vec->add_option("--out", "output GeoJSON path")->required();
  vec->add_flag("--no-dissolve", "keep tile-boundary polygons separate");

  CLI::App* clean = app.add_subcommand("clean", "post-process a polygon GeoJSON");
  clean->add_option("--in", "input GeoJSON")->required();
  clean->add_option("--out", "output GeoJSON")->required();
  clean->add_option("--buildings", "building footprints GeoJSON");
  clean->add_option("--roads", "road centerlines GeoJSON");
  clean->add_option("--report", "write the run report JSON here");

  CLI::App* eval = app.add_subcommand("eval", "score predictions against ground truth");
  eval->add_option("--pred-dir", "prediction mask tiles");
  eval->add_option("--pred-geojson", "prediction polygons GeoJSON");
  eval->add_option("--gt-dir", "ground truth mask tiles")->required();
  eval->add_option("--report", "write the run report JSON here");

  CLI::App* synth = app.add_subcommand("synth", "generate synthetic fixtures");
  synth->add_option("--out-dir", "fixture output root")->required();
  synth->add_option("--n-tiles", "tile count")->default_val(16);
  synth->add_option("--tile-px", "tile size in pixels")->default_val(512);

  CLI::App* pipe =
      app.add_subcommand("pipeline", "vectorize, clean, and evaluate in one pass");
  pipe->add_option("--pred-dir", "prediction mask tiles")->required();
  pipe->add_option("--gt-dir", "ground truth mask tiles")->required();
  pipe->add_option("--out-dir", "output directory")->required();
  pipe->add_option("--buildings", "building footprints GeoJSON");
  pipe->add_option("--roads", "road centerlines GeoJSON");
  pipe->add_flag("--no-dissolve", "keep tile-boundary polygons separate");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return dispatch(app, common);
  } catch (const lotpoly::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lotpoly::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
