#!/usr/bin/env python3
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
# Quasi chord runner
#
# MIT License, see LICENSE.md
#
# Script Name  : QuasiChordRunner.py
# Purpose/Usage: This script estimates point-kernel integrals over the bodies
#                of a scene with the chord, ray, distance-distribution and
#                oracle methods, and writes reports, a comparison table and
#                plot-ready histogram files.
#
# Notes:
# The exit status is 1 when the scene cannot be read or two methods disagree
# by more than 5 combined standard errors.
#

import argparse
import logging
import os
import sys
import time

import QuasiChord

from QuasiChord import logger
from QuasiChord import output_writers
from QuasiChord import QuasiChordRunnerBase
from QuasiChord import resources


def _ParseMethods(value):
    return tuple(method.strip().lower() for method in value.split(',') if method.strip())


def Main():
    '''The main program function.

    Returns:
      bool: True if successful or False if not.
    '''
    description = (
        'QuasiChordRunner estimates point-kernel integrals over the bodies of a\n'
        'scene from signed chord and ray length distributions.\n'
        'This is version {0:s}.\n\n'
        'Notes:\n-----\n'
        'Scenes are JSON documents; with more than one body the pair integrals\n'
        'A[s,t] are estimated as well.').format(QuasiChord.__version__)

    arg_parser = argparse.ArgumentParser(
        description=description, formatter_class=argparse.RawTextHelpFormatter)
    arg_parser.add_argument('--scene', required=True, help='Path to the scene file')
    arg_parser.add_argument(
        '--methods', type=_ParseMethods, default=resources.RunConfig.METHODS,
        help='Comma separated methods: chord, ray, dd, oracle (Default is all)')
    arg_parser.add_argument('--lines', type=int, default=1000000, help='Number of lines')
    arg_parser.add_argument('--rays', type=int, default=1000000, help='Number of rays')
    arg_parser.add_argument(
        '--pairs', type=int, default=1000000,
        help='Number of point pairs and oracle samples')
    arg_parser.add_argument('--bins', type=int, default=512, help='Number of bins')
    arg_parser.add_argument(
        '--lmax', type=float, default=None,
        help='Histogram range (Default is the scene diameter times 1.0001)')
    arg_parser.add_argument('--seed', type=int, default=0, help='Run seed')
    arg_parser.add_argument('--workers', type=int, default=1, help='Worker processes')
    arg_parser.add_argument(
        '--slots', type=int, default=32, help='Replicate slots of the jackknife')
    arg_parser.add_argument('--out', required=True, help='Output folder')

    arg_parser.add_argument(
         '-f', '--output_format', action='store', choices=('JSON', 'SQLITE'),
         metavar='FORMAT', default='JSON', help=(
             'Output format: JSON, SQLITE  (Default is JSON)'), type=str.upper)

    arg_parser.add_argument(
        '-l', '--log_level', help='Log levels: INFO, DEBUG, WARNING, ERROR (Default is INFO)')

    args = arg_parser.parse_args()

    output_path = args.out.rstrip('\\/')

    if not os.path.isfile(args.scene):
        print('Exiting..Scene file not found {0:s}'.format(args.scene))
        return False

    if not os.path.exists(output_path):
        print('Creating output folder {0:s}'.format(output_path))
        os.makedirs(output_path)

    log_file_path = os.path.join(output_path, 'Log.' + time.strftime('%Y%m%d-%H%M%S') + '.txt')

    log_levels = {
        'INFO': logging.INFO, 'DEBUG': logging.DEBUG, 'WARNING': logging.WARNING,
        'ERROR': logging.ERROR, 'CRITICAL': logging.CRITICAL}
    log_level = logging.INFO
    if args.log_level:
        if args.log_level.upper() not in log_levels:
            print('Invalid input type for log level. Valid values are INFO, DEBUG, WARNING, ERROR')
            return False
        log_level = log_levels[args.log_level.upper()]

    log_console_handler = logging.StreamHandler()
    log_console_handler.setLevel(log_level)
    log_console_format = logging.Formatter('%(levelname)s - %(message)s')
    log_console_handler.setFormatter(log_console_format)
    logger.addHandler(log_console_handler)

    log_file_handler = logging.FileHandler(log_file_path)
    log_file_handler.setFormatter(log_console_format)
    logger.addHandler(log_file_handler)
    logger.setLevel(log_level)

    config = resources.RunConfig(
        scene_path=args.scene, methods=args.methods, n_lines=args.lines,
        n_rays=args.rays, n_pairs=args.pairs, n_bins=args.bins, l_max=args.lmax,
        seed=args.seed, workers=args.workers, output_path=output_path,
        output_format=args.output_format, n_slots=args.slots)

    runner = QuasiChordRunnerBase.QuasiChordRunnerHelper(config)
    if not runner.ReadScene():
        return False

    if args.output_format == 'SQLITE':
        output_writer = output_writers.SQLiteDatabaseOutputWriter(output_path)
    else:
        output_writer = output_writers.FileOutputWriter(output_path)

    if not output_writer.Open():
        return False

    time_processing_started = time.time()
    logger.info('Started processing')

    result = runner.Run(output_writer)

    output_writer.Close()

    time_processing_ended = time.time()
    run_time = time_processing_ended - time_processing_started
    logger.info('Finished in time = {0:s}'.format(
        time.strftime('%H:%M:%S', time.gmtime(run_time))))
    logger.info('{0:d} estimates, {1:d} comparisons'.format(
        len(runner.reports), len(runner.comparison)))

    return result


if __name__ == '__main__':
    if not Main():
        sys.exit(1)
    else:
        sys.exit(0)
