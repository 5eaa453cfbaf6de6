# -*- coding: utf-8 -*-
'''Output writers for reports, comparison tables, histograms and matrices.

Histogram CSVs and matrix_manifest.json are written by every writer; the
writers differ in where reports and the comparison table go.
'''

import csv
import io
import json
import os
import sqlite3

import numpy as np

from QuasiChord import errors
from QuasiChord import logger
from QuasiChord import QuasiChordRunnerBase


_HISTOGRAM_HEADER = ('bin_lo', 'bin_hi', 'signed_count', 'density', 'stderr')

_COMPARISON_HEADER = (
    'label', 'method_a', 'method_b', 'value_a', 'value_b', 'stderr', 'z')


def _FormatNumber(value):
    return '{0:.17g}'.format(value)


def _ToJson(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError('Cannot serialize {0!s}'.format(type(value)))


def GetHistogramRecord(histogram):
    '''Returns the counters a histogram is normalized with.

    Returns:
      list[str]: N_lines, N_chords, m_hat and seed as key=value fields, the
          first prefixed with '# '.
    '''
    m_hat = 0.0
    if histogram.number_of_lines:
        m_hat = histogram.number_of_chords / histogram.number_of_lines
    seed = '' if histogram.seed is None else str(histogram.seed)
    return [
        '# N_lines={0:d}'.format(histogram.number_of_lines),
        'N_chords={0:d}'.format(histogram.number_of_chords),
        'm_hat={0:s}'.format(_FormatNumber(m_hat)), 'seed={0:s}'.format(seed)]


def GetHistogramRows(histogram):
    '''Returns the per-bin rows of a histogram, none for an empty histogram.

    Returns:
      list[list[str]]: bin edges, signed count, density and its standard
          error per bin.
    '''
    try:
        if histogram.mode == 'dd':
            qd = histogram.NormalizeDistances()
        else:
            qd = histogram.Normalize()
    except errors.NoDataError:
        return []
    return [
        [_FormatNumber(histogram.edges[index]), _FormatNumber(histogram.edges[index + 1]),
         str(int(histogram.counts[index])),
         _FormatNumber(qd.values[index]), _FormatNumber(qd.stderr[index])]
        for index in range(histogram.n_bins)]


class FileOutputWriter(QuasiChordRunnerBase.OutputWriter):
    '''Output writer that writes reports.json and comparison.tsv.'''

    def __init__(self, path):
        '''Initializes a file output writer.

        Args:
          path (str): output directory.
        '''
        super(FileOutputWriter, self).__init__()
        self._manifest = []
        self._path = path

    def _WriteCsv(self, file_name, header, rows, delimiter=',', record=None):
        file_path = os.path.join(self._path, file_name)
        try:
            with io.open(file_path, 'wt', encoding='utf-8', newline='') as file_object:
                writer = csv.writer(file_object, delimiter=delimiter, lineterminator='\n')
                if record:
                    writer.writerow(record)
                writer.writerow(header)
                writer.writerows(rows)
        except (IOError, OSError):
            logger.exception('Error writing to output file %s', file_path)

    def _WriteJson(self, file_name, document):
        file_path = os.path.join(self._path, file_name)
        try:
            with io.open(file_path, 'wt', encoding='utf-8') as file_object:
                json.dump(document, file_object, indent=2, sort_keys=True, default=_ToJson)
        except (IOError, OSError):
            logger.exception('Error writing to output file %s', file_path)

    def Close(self):
        '''Writes the matrix manifest and closes the output writer.'''
        if self._path:
            self._WriteJson('matrix_manifest.json', {'matrices': self._manifest})
        self._path = None

    def Open(self):
        '''Opens the output writer.

        Returns:
          bool: True if successful or False on error.
        '''
        try:
            if not os.path.isdir(self._path):
                logger.info('Creating output folder %s', self._path)
                os.makedirs(self._path)
        except (IOError, OSError):
            logger.exception('Failed to create output folder %s', self._path)
            return False
        return True

    def WriteComparison(self, rows):
        self._WriteCsv('comparison.tsv', _COMPARISON_HEADER, [
            [row['label'], row['method_a'], row['method_b'],
             _FormatNumber(row['value_a']), _FormatNumber(row['value_b']),
             _FormatNumber(row['stderr']), _FormatNumber(row['z'])]
            for row in rows], delimiter='\t')

    def WriteHistogram(self, name, histogram):
        self._WriteCsv(
            '{0:s}.hist.csv'.format(name), _HISTOGRAM_HEADER, GetHistogramRows(histogram),
            record=GetHistogramRecord(histogram))

    def WriteMatrix(self, name, matrix):
        labels = matrix.zone_set.labels
        entry = matrix.GetManifest()
        entry['name'] = name
        for cell_entry, ((source, target), cell) in zip(
                entry['cells'], matrix.cells.items()):
            file_name = '{0:s}.{1:s}.{2:s}'.format(name, labels[source], labels[target])
            cell_entry['file'] = file_name + '.hist.csv'
            self.WriteHistogram(file_name, cell)
        self.WriteHistogram(name + '.union', matrix.union)
        self._manifest.append(entry)

    def WriteReports(self, reports):
        self._WriteJson('reports.json', [report.ToDict() for report in reports])


class SQLiteDatabaseOutputWriter(FileOutputWriter):
    '''Output writer that writes reports and comparisons to a SQLite database.'''

    _CREATE_REPORTS_TABLE_QUERY = (
        'CREATE TABLE reports (Label TEXT, Method TEXT, Value REAL, '
        'StdErr REAL, Samples INTEGER, Normalizer TEXT, Seed INTEGER, '
        'Runtime REAL, Alternatives TEXT, Metadata TEXT)')

    _CREATE_COMPARISON_TABLE_QUERY = (
        'CREATE TABLE comparison (Label TEXT, MethodA TEXT, MethodB TEXT, '
        'ValueA REAL, ValueB REAL, StdErr REAL, Z REAL)')

    _INSERT_REPORTS_VALUES_QUERY = 'INSERT INTO reports VALUES (?,?,?,?,?,?,?,?,?,?)'

    _INSERT_COMPARISON_VALUES_QUERY = 'INSERT INTO comparison VALUES (?,?,?,?,?,?,?)'

    def __init__(self, path):
        '''Initializes a SQLite database output writer.

        Args:
          path (str): output directory; the database is reports.sqlite in it.
        '''
        super(SQLiteDatabaseOutputWriter, self).__init__(path)
        self._connection = None
        self._database_path = os.path.join(path, 'reports.sqlite')

    def Close(self):
        '''Closes the output writer.'''
        if self._connection:
            try:
                self._connection.commit()
                self._connection.close()

            except sqlite3.Error:
                logger.exception('Unable to close database')

            self._connection = None

        super(SQLiteDatabaseOutputWriter, self).Close()

    def Open(self):
        '''Opens the output writer.'''
        if not super(SQLiteDatabaseOutputWriter, self).Open():
            return False

        if os.path.exists(self._database_path):
            try:
                logger.info('Database already exists, trying to delete it.')
                os.remove(self._database_path)

            except (IOError, OSError):
                logger.exception(
                    'Unable to remove existing database at %s.', self._database_path)
                return False

        try:
            logger.info('Trying to create new database file at %s.', self._database_path)
            self._connection = sqlite3.connect(self._database_path)

            cursor = self._connection.cursor()
            cursor.execute(self._CREATE_REPORTS_TABLE_QUERY)
            cursor.execute(self._CREATE_COMPARISON_TABLE_QUERY)

        except sqlite3.Error:
            logger.exception('Failed to create database at %s', self._database_path)
            return False

        return True

    def WriteComparison(self, rows):
        if not self._connection:
            return
        try:
            self._connection.cursor().executemany(
                self._INSERT_COMPARISON_VALUES_QUERY, [
                    (row['label'], row['method_a'], row['method_b'], row['value_a'],
                     row['value_b'], row['stderr'], row['z']) for row in rows])
        except sqlite3.Error:
            logger.exception('Error inserting comparison into database')

    def WriteReports(self, reports):
        if not self._connection:
            return
        try:
            self._connection.cursor().executemany(
                self._INSERT_REPORTS_VALUES_QUERY, [
                    (report.label, report.method, report.value, report.stderr,
                     report.n_samples, report.normalizer_used, report.seed,
                     report.runtime,
                     json.dumps(report.alternatives, sort_keys=True, default=_ToJson),
                     json.dumps(report.metadata, sort_keys=True, default=_ToJson))
                    for report in reports])
        except sqlite3.Error:
            logger.exception('Error inserting reports into database')
