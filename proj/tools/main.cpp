#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using parkcast::cli::AblationArgs;
using parkcast::cli::BuildArgs;
using parkcast::cli::CommonArgs;
using parkcast::cli::CvArgs;
using parkcast::cli::EvalArgs;
using parkcast::cli::LabelArgs;
using parkcast::cli::PredictArgs;
using parkcast::cli::SynthArgs;
using parkcast::cli::TrainArgs;

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--out-dir", args.out_dir, "Directory for outputs and manifest.json")->required();
  cmd->add_option("--config", args.config_path, "key=value config file");
  cmd->add_option("--seed", args.seed, "Random seed (overrides config)");
}

void add_train_options(CLI::App* cmd, TrainArgs& args) {
  cmd->add_option("--dataset", args.dataset_path, "dataset.csv")->required();
  cmd->add_option("--lr0", args.lr0, "Initial learning rate");
  cmd->add_option("--decay", args.decay, "Total learning-rate decay factor");
  cmd->add_option("--epochs", args.epochs, "Training epochs");
  cmd->add_option("--batch-size", args.batch_size, "Mini-batch size");
  cmd->add_option("--max-train-rows", args.max_train_rows, "Subsample cap for training rows (0 = all)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"On-street parking violation-rate prediction toolchain"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic city corpus");
  add_common(synth, synth_args);
  synth->add_option("--sectors", synth_args.n_sectors, "Number of sectors");
  synth->add_option("--pois", synth_args.n_pois, "Number of PoIs");
  synth->add_option("--days", synth_args.n_days, "Number of days");
  synth->add_option("--mean-capacity", synth_args.mean_capacity, "Average sector capacity");
  synth->add_option("--coverage", synth_args.scan_coverage, "Probability a cell is scanned");
  synth->add_option("--start-date", synth_args.start_date, "First date, YYYY-MM-DD");

  LabelArgs label_args;
  CLI::App* label = app.add_subcommand("label", "Turn scans into violation-rate targets");
  add_common(label, label_args);
  label->add_option("--scans", label_args.scans_path, "scans.csv")->required();
  label->add_option("--sectors", label_args.sectors_path, "sectors.csv")->required();
  label->add_option("--mode", label_args.mode, "raw | smoothed (default smoothed)");
  label->add_option("--sigma", label_args.sigma_minutes, "Smoothing sigma in minutes");
  label->add_option("--neighbors", label_args.neighbor_slots, "Neighbor slots on each side");

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand("build", "Featurize labels into a dataset");
  add_common(build, build_args);
  build->add_option("--data-dir", build_args.data_dir, "Directory with sectors/pois/weather/calendar CSVs")
      ->required();
  build->add_option("--labels", build_args.labels_path, "labels.csv")->required();

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train the residual network");
  add_common(train, train_args);
  add_train_options(train, train_args);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  add_common(eval, eval_args);
  eval->add_option("--model", eval_args.model_path, "model.json")->required();
  eval->add_option("--dataset", eval_args.dataset_path, "dataset.csv")->required();

  CvArgs cv_args;
  CLI::App* cv = app.add_subcommand("cv", "k-fold cross-validation curves");
  add_common(cv, cv_args);
  add_train_options(cv, cv_args);
  cv->add_option("--k", cv_args.k, "Number of folds (default 4)");

  AblationArgs ablation_args;
  CLI::App* ablation = app.add_subcommand("ablation", "2x2 smoothing ablation table");
  add_common(ablation, ablation_args);
  ablation->add_option("--data-dir", ablation_args.data_dir, "Directory with the full corpus CSVs")
      ->required();
  ablation->add_option("--lr0", ablation_args.lr0, "Initial learning rate");
  ablation->add_option("--decay", ablation_args.decay, "Total learning-rate decay factor");
  ablation->add_option("--epochs", ablation_args.epochs, "Training epochs");
  ablation->add_option("--batch-size", ablation_args.batch_size, "Mini-batch size");
  ablation->add_option("--max-train-rows", ablation_args.max_train_rows,
                       "Subsample cap for training rows (0 = all)");
  ablation->add_option("--sigma", ablation_args.sigma_minutes, "Smoothing sigma in minutes");
  ablation->add_option("--neighbors", ablation_args.neighbor_slots, "Neighbor slots on each side");

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand("predict", "Emit predictions for a dataset's cells");
  add_common(predict, predict_args);
  predict->add_option("--model", predict_args.model_path, "model.json")->required();
  predict->add_option("--dataset", predict_args.dataset_path, "dataset.csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) parkcast::cli::cmd_synth(synth_args);
    if (label->parsed()) parkcast::cli::cmd_label(label_args);
    if (build->parsed()) parkcast::cli::cmd_build(build_args);
    if (train->parsed()) parkcast::cli::cmd_train(train_args);
    if (eval->parsed()) parkcast::cli::cmd_eval(eval_args);
    if (cv->parsed()) parkcast::cli::cmd_cv(cv_args);
    if (ablation->parsed()) parkcast::cli::cmd_ablation(ablation_args);
    if (predict->parsed()) parkcast::cli::cmd_predict(predict_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
