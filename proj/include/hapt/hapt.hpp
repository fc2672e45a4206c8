#ifndef HAPT_HAPT_HPP
#define HAPT_HAPT_HPP

#include <hapt/activity.hpp>
#include <hapt/boosting.hpp>
#include <hapt/dataset.hpp>
#include <hapt/evaluation.hpp>
#include <hapt/folds.hpp>
#include <hapt/learner.hpp>
#include <hapt/metrics.hpp>
#include <hapt/model_io.hpp>
#include <hapt/numerics.hpp>
#include <hapt/report.hpp>
#include <hapt/summary.hpp>

#endif // HAPT_HAPT_HPP
