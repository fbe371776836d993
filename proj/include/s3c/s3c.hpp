#pragma once

#include "s3c/common.hpp"
#include "s3c/rng.hpp"
#include "s3c/dataset.hpp"
#include "s3c/io.hpp"
#include "s3c/omp.hpp"
#include "s3c/dropout.hpp"
#include "s3c/damped_omp.hpp"
#include "s3c/consensus.hpp"
#include "s3c/eigensolver.hpp"
#include "s3c/kmeans.hpp"
#include "s3c/spectral.hpp"
#include "s3c/metrics.hpp"
