#include "commands.hpp"

#include "spider/error.hpp"
#include "spider/kiviat.hpp"
#include "spider/numfmt.hpp"
#include "spider/render.hpp"
#include "spider/server.hpp"
#include "spider/sonify.hpp"
#include "spider/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <ostream>
#include <sstream>

namespace spider::cli {

namespace {

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

Ensemble load_input(const std::filesystem::path& path, InputFormat format, std::ostream& log) {
  if (format == InputFormat::Auto) {
    const auto guessed = format_from_extension(path);
    format = !guessed ? InputFormat::Noaa : *guessed == EnsembleFormat::Csv ? InputFormat::Csv : InputFormat::Json;
  }
  switch (format) {
    case InputFormat::Csv: return load_ensemble(path, EnsembleFormat::Csv);
    case InputFormat::Json: return load_ensemble(path, EnsembleFormat::Json);
    default: break;
  }
  auto result = load_noaa_sst(path);
  if (!result.dropped_years.empty()) {
    log << "dropped incomplete years:";
    for (auto y : result.dropped_years) log << ' ' << y;
    log << '\n';
  }
  return std::move(result.ensemble);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto value = parse_double(trim(item));
    if (!value) throw ValidationError("not a number in list: '" + item + "'");
    out.push_back(*value);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

FrameSequence sequence_for(const AnalysisDocument& doc, const std::optional<std::string>& strategy,
                           const std::optional<std::uint64_t>& seed, std::optional<double> frame_duration = {}) {
  const std::uint64_t s = seed ? *seed : std::getenv("SOUNDING_SPIDER_SEED") ? default_seed() : doc.parameters.seed;
  return build_sequence(doc.ensemble, doc.hdr, parse_strategy(strategy.value_or(doc.parameters.strategy), s),
                        frame_duration.value_or(doc.parameters.frame_duration));
}

}  // namespace

void run_hdr(const HdrCommand& cmd, std::ostream& log) {
  auto ensemble = load_input(cmd.input, cmd.format, log);
  const auto doc = analyze(std::move(ensemble), cmd.params, cmd.input.filename().string());
  make_dir(cmd.out);
  save_analysis(doc, cmd.out / "analysis.json");

  FigureSpec spec;
  spec.title = "HDR boxplot";
  write_file(cmd.out / "hdr_boxplot.svg", render_hdr_boxplot(doc.ensemble, doc.hdr, spec));
  spec.title = "Functional PDF";
  write_file(cmd.out / "functional_pdf.svg", render_functional_pdf(doc.ensemble, spec));

  const auto& e = doc.ensemble;
  log << "N = " << e.size() << ", p = " << e.input_dim() << ", m = " << e.output_dim() << '\n';
  log << "r = " << doc.reduction.dim() << " (cumulative variance " << format_fixed(doc.reduction.cumulative_ratio(), 4)
      << ")\n";
  log << "outliers = " << doc.hdr.outlier_indices.size();
  if (!doc.hdr.outlier_indices.empty()) {
    log << " [";
    for (std::size_t k = 0; k < doc.hdr.outlier_indices.size(); ++k) {
      const auto i = doc.hdr.outlier_indices[k];
      log << (k ? ", " : "") << (e.labels().empty() ? std::to_string(i) : e.labels()[i]);
    }
    log << ']';
  }
  log << '\n';
  log << "median index = " << doc.hdr.median_index;
  if (!e.labels().empty()) log << " (" << e.labels()[doc.hdr.median_index] << ')';
  log << '\n';
}

void run_fhops(const FhopsCommand& cmd, std::ostream& log) {
  const auto doc = load_analysis(cmd.analysis);
  const auto seq = sequence_for(doc, cmd.strategy, cmd.seed, cmd.frame_duration);
  const auto tones = tone_manifest(seq, doc.hdr, doc.parameters.f_base, doc.parameters.f_max);
  make_dir(cmd.out);

  FigureSpec spec;
  spec.title = "f-HOPs";
  write_fhops_frames(cmd.out, doc.ensemble, seq, doc.hdr, spec);
  const auto track = tone_track(tones);
  write_wav(synthesize(track), static_cast<std::uint32_t>(track.sample_rate), cmd.out / "tones.wav");

  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& f = seq.frames[k];
    frames.push_back({{"file", frame_filename(k)},
                      {"realization", f.realization},
                      {"distance", f.distance},
                      {"density", f.density},
                      {"band", f.band.label()},
                      {"outlier", f.outlier},
                      {"frequency", tones.frequencies[k]}});
  }
  nlohmann::json manifest = {{"schema_version", kSchemaVersion},
                             {"toolkit_version", kToolkitVersion},
                             {"strategy", seq.strategy.name()},
                             {"seed", seq.strategy.seed},
                             {"frame_duration", seq.frame_duration},
                             {"order", seq.order},
                             {"tones",
                              {{"f_base", tones.f_base},
                               {"f_max", tones.f_max},
                               {"d_ref", tones.d_ref},
                               {"sample_rate", tones.sample_rate},
                               {"frequencies", tones.frequencies}}},
                             {"audio", "tones.wav"},
                             {"frames", frames}};
  write_file(cmd.out / "sequence.json", manifest.dump(1) + "\n");

  log << seq.size() << " frames (" << seq.strategy.name() << "), "
      << format_fixed(static_cast<double>(seq.size()) * seq.frame_duration, 2) << " s of audio\n";
}

void run_kiviat(const KiviatCommand& cmd, std::ostream& log) {
  const auto doc = load_analysis(cmd.analysis);
  const auto& e = doc.ensemble;
  if (e.input_dim() < 2)
    throw ValidationError("Kiviat scenes need at least 2 inputs (p = " + std::to_string(e.input_dim()) + ")");

  SceneOptions options;
  options.stacking = LayerKey::parse(cmd.stack);
  options.colour = LayerKey::parse(cmd.colour);
  options.probe = cmd.probe ? QoiProbe::parse(*cmd.probe, e) : QoiProbe::default_for(e);
  if (cmd.heights == "rank")
    options.heights = HeightMode::Rank;
  else if (cmd.heights == "value")
    options.heights = HeightMode::Value;
  else
    throw ValidationError("heights must be 'rank' or 'value'");
  options.colormap = cmd.colormap;
  Colormap::named(cmd.colormap);

  const auto seq = sequence_for(doc, cmd.strategy, cmd.seed);
  make_dir(cmd.out);
  if (e.input_dim() == 2) {
    const auto tree = build_tree(e, doc.hdr, options, cmd.theta_max);
    write_file(cmd.out / "scene.json", tree_to_json(tree, doc, seq));
    write_file(cmd.out / "tree.obj", tree_to_obj(tree));
    log << "tree plot: " << tree.segments.size() << " segments\n";
  } else {
    const auto scene = build_scene(e, doc.hdr, options);
    write_file(cmd.out / "scene.json", scene_to_json(scene, doc, seq));
    const auto mesh = export_mesh(scene);
    write_obj(mesh, cmd.out / "kiviat.obj", scene_comments(scene));
    log << "kiviat: " << scene.layers.size() << " layers, " << mesh.vertices.size() << " vertices, "
        << mesh.quads.size() << " quads\n";
  }

  FigureSpec spec;
  spec.title = "Parallel coordinates";
  write_file(cmd.out / "parallel_coordinates.svg", render_parallel_coordinates(e, *options.probe, cmd.highlight, spec));
  if (options.probe->kind == QoiProbe::Kind::AtIndex) {
    spec.title.clear();
    spec.y_label = "value";
    write_file(cmd.out / "probe_pdf.svg", render_functional_pdf(e, spec, options.probe->index));
  }
}

void run_synth(const SynthCommand& cmd, std::ostream& log) {
  const auto e = synthesize_ensemble(cmd.seed, cmd.n, cmd.p, cmd.m, cmd.outliers);
  const auto format = format_from_extension(cmd.out);
  if (!format) throw ValidationError("output must end in .csv or .json");
  if (cmd.out.has_parent_path()) make_dir(cmd.out.parent_path());
  write_ensemble(e, cmd.out, *format);
  log << "wrote " << cmd.out.string() << " (N = " << e.size() << ", p = " << e.input_dim() << ", m = " << e.output_dim()
      << ")\n";
}

namespace {
StaticServer* active_server = nullptr;
extern "C" void on_signal(int) {
  if (active_server) active_server->stop();
}
}  // namespace

void run_serve(const std::filesystem::path& dir, const std::string& host, int port, std::ostream& log) {
  StaticServer server(dir);
  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind(host, port) ? port : -1);
  if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  log << "serving " << server.root().string() << " at http://" << host << ':' << bound << "/\n" << std::flush;
  active_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  active_server = nullptr;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Highest-density-region statistics and encodings for functional ensembles", "sounding-spider"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.require_subcommand(1);

  HdrCommand hdr;
  std::string format = "auto", alphas = "0.5,0.1";
  std::optional<std::uint64_t> hdr_seed;
  auto* c_hdr = app.add_subcommand("hdr", "reduce, estimate densities and write analysis.json and the HDR boxplot");
  c_hdr->add_option("input", hdr.input, "ensemble file (.csv, .json or NOAA text)")->required();
  c_hdr->add_option("--format", format, "auto, csv, json or noaa")->check(CLI::IsMember({"auto", "csv", "json", "noaa"}));
  c_hdr->add_option("--variance-target", hdr.params.variance_target, "explained variance to retain")
      ->capture_default_str();
  c_hdr->add_option("--alphas", alphas, "comma-separated HDR levels")->capture_default_str();
  c_hdr->add_option("--outlier-alpha", hdr.params.outlier_alpha, "outlier level")->capture_default_str();
  c_hdr->add_option("--reference", hdr.params.reference, "median or index:<i>")->capture_default_str();
  c_hdr->add_option("--strategy", hdr.params.strategy, "default frame order")->capture_default_str();
  c_hdr->add_option("--seed", hdr_seed, "default shuffle seed");
  c_hdr->add_option("--out", hdr.out, "output directory")->capture_default_str();

  FhopsCommand fhops;
  auto* c_fhops = app.add_subcommand("fhops", "write f-HOPs frames, tones.wav and sequence.json");
  c_fhops->add_option("analysis", fhops.analysis, "analysis.json")->required();
  c_fhops->add_option("--strategy", fhops.strategy, "shuffle, by_distance or by_index");
  c_fhops->add_option("--seed", fhops.seed, "shuffle seed");
  c_fhops->add_option("--frame-duration", fhops.frame_duration, "seconds per frame");
  c_fhops->add_option("--out", fhops.out, "output directory")->capture_default_str();

  KiviatCommand kiviat;
  auto* c_kiviat = app.add_subcommand("kiviat", "write scene.json and the 3D Kiviat OBJ (tree plot for p = 2)");
  c_kiviat->add_option("analysis", kiviat.analysis, "analysis.json")->required();
  c_kiviat->add_option("--stack", kiviat.stack, "qoi, hdr or input:<name>")->capture_default_str();
  c_kiviat->add_option("--colour,--color", kiviat.colour, "qoi, hdr or input:<name>")->capture_default_str();
  c_kiviat->add_option("--probe", kiviat.probe, "<index>, at:<coordinate>, max or mean");
  c_kiviat->add_option("--heights", kiviat.heights, "rank or value")->capture_default_str();
  c_kiviat->add_option("--colormap", kiviat.colormap, "viridis or plasma")->capture_default_str();
  c_kiviat->add_option("--theta-max", kiviat.theta_max, "tree plot rotation for the farthest realization")
      ->capture_default_str();
  c_kiviat->add_option("--highlight", kiviat.highlight, "parallel coordinates highlight quantile")
      ->capture_default_str();
  c_kiviat->add_option("--strategy", kiviat.strategy, "frame order for the tone manifest");
  c_kiviat->add_option("--seed", kiviat.seed, "shuffle seed");
  c_kiviat->add_option("--out", kiviat.out, "output directory")->capture_default_str();

  std::filesystem::path serve_dir = ".";
  std::string host = "127.0.0.1";
  int port = 8000;
  auto* c_serve = app.add_subcommand("serve", "serve a directory read-only over HTTP");
  c_serve->add_option("dir", serve_dir, "directory to serve")->capture_default_str();
  c_serve->add_option("--port", port, "port (0 picks a free one)")->capture_default_str();
  c_serve->add_option("--host", host, "address to bind")->capture_default_str();

  SynthCommand synth;
  auto* c_synth = app.add_subcommand("synth", "write a synthetic ensemble");
  c_synth->add_option("out", synth.out, "output file (.csv or .json)")->required();
  c_synth->add_option("--seed", synth.seed)->capture_default_str();
  c_synth->add_option("-n", synth.n, "realizations")->capture_default_str();
  c_synth->add_option("-p", synth.p, "inputs")->capture_default_str();
  c_synth->add_option("-m", synth.m, "curve length")->capture_default_str();
  c_synth->add_option("--outliers", synth.outliers, "shifted realizations")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (c_hdr->parsed()) {
      hdr.format = format == "csv" ? InputFormat::Csv : format == "json" ? InputFormat::Json
                   : format == "noaa" ? InputFormat::Noaa : InputFormat::Auto;
      hdr.params.alphas = parse_list(alphas);
      hdr.params.seed = hdr_seed ? *hdr_seed : default_seed();
      run_hdr(hdr, out);
    } else if (c_fhops->parsed()) {
      run_fhops(fhops, out);
    } else if (c_kiviat->parsed()) {
      run_kiviat(kiviat, out);
    } else if (c_serve->parsed()) {
      run_serve(serve_dir, host, port, out);
    } else if (c_synth->parsed()) {
      run_synth(synth, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

}  // namespace spider::cli
